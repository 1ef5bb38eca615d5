#ifndef PROOFWRITER_INFERENCE_HPP
#define PROOFWRITER_INFERENCE_HPP

#include <algorithm>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "proofwriter/model.hpp"

namespace proofwriter {

class InferenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class StratificationError : public InferenceError {
public:
    StratificationError(std::string msg, std::vector<std::string> cycle)
        : InferenceError(std::move(msg)), cycle_(std::move(cycle)) {}
    const std::vector<std::string>& cycle() const { return cycle_; }

private:
    std::vector<std::string> cycle_;
};

class InconsistentTheoryError : public InferenceError {
public:
    InconsistentTheoryError(std::string msg, Literal lit)
        : InferenceError(std::move(msg)), literal_(std::move(lit)) {}
    const Literal& literal() const { return literal_; }

private:
    Literal literal_;
};

// ---------------------------------------------------------------------------
// Ground rule instances

struct GroundRuleInstance {
    SentenceId rule;
    std::vector<Literal> conditions; // ground, in rule condition order
    Literal conclusion;              // ground
};

inline std::vector<GroundRuleInstance> ground_instances(const Theory& t) {
    Signature sig = signature_of(t);
    std::vector<GroundRuleInstance> out;
    for (const Rule& r : t.rules()) {
        bool has_var = r.conclusion.atom.has_variable();
        for (const auto& c : r.conditions) has_var = has_var || c.atom.has_variable();
        if (!has_var) {
            out.push_back({r.id, r.conditions, r.conclusion});
            continue;
        }
        for (const auto& [name, article] : sig.entities) {
            Term binding = Term::entity(name, article);
            GroundRuleInstance gi{r.id, {}, substitute(r.conclusion, binding)};
            gi.conditions.reserve(r.conditions.size());
            for (const auto& c : r.conditions) gi.conditions.push_back(substitute(c, binding));
            out.push_back(std::move(gi));
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Stratification

namespace detail {

// Predicates are keyed by attribute or verb token; the kind tag keeps an
// attribute and a verb with the same spelling apart.
using PredKey = std::pair<int, std::string>;

inline PredKey pred_key(const Atom& a) {
    return {a.kind == Atom::Kind::Attribute ? 0 : 1, a.predicate};
}

inline std::string pred_display(const PredKey& k) {
    return (k.first == 0 ? "attribute '" : "verb '") + k.second + "'";
}

struct PredGraph {
    std::vector<PredKey> preds;
    std::map<PredKey, int> index;
    // adjacency: edges cond-pred -> concl-pred, flagged negative
    std::vector<std::vector<std::pair<int, bool>>> out_edges;

    int node(const PredKey& k) {
        auto it = index.find(k);
        if (it != index.end()) return it->second;
        int id = static_cast<int>(preds.size());
        preds.push_back(k);
        index.emplace(k, id);
        out_edges.emplace_back();
        return id;
    }
};

inline PredGraph build_pred_graph(const Theory& t) {
    PredGraph g;
    for (const Rule& r : t.rules()) {
        int head = g.node(pred_key(r.conclusion.atom));
        for (const auto& c : r.conditions) {
            int tail = g.node(pred_key(c.atom));
            g.out_edges[tail].push_back({head, c.negated});
        }
    }
    return g;
}

} // namespace detail

struct StratificationResult {
    bool ok = true;
    std::vector<std::string> cycle;            // offending predicate cycle when !ok
    std::map<detail::PredKey, int> strata;     // 0-based stratum per predicate
    int stratum_count = 1;
};

// ok iff no dependency cycle passes through a negated condition. Also
// assigns strata when stratifiable.
inline StratificationResult check_stratifiable(const Theory& t) {
    detail::PredGraph g = detail::build_pred_graph(t);
    const int n = static_cast<int>(g.preds.size());
    StratificationResult res;
    for (int i = 0; i < n; ++i) res.strata[g.preds[i]] = 0;

    // Bellman-Ford style stratum relaxation: stratum(head) >= stratum(tail),
    // strictly greater across negative edges. More than n rounds of change
    // means a negative cycle.
    std::vector<int> stratum(n, 0);
    for (int round = 0; round <= n + 1; ++round) {
        bool changed = false;
        for (int u = 0; u < n; ++u) {
            for (auto [v, neg] : g.out_edges[u]) {
                int need = stratum[u] + (neg ? 1 : 0);
                if (stratum[v] < need) {
                    stratum[v] = need;
                    changed = true;
                }
            }
        }
        if (!changed) {
            for (int i = 0; i < n; ++i) res.strata[g.preds[i]] = stratum[i];
            for (int i = 0; i < n; ++i)
                res.stratum_count = std::max(res.stratum_count, stratum[i] + 1);
            return res;
        }
    }

    // Extract a witness cycle through some negative edge: find u -neg-> v
    // with a path v ->* u.
    res.ok = false;
    for (int u = 0; u < n && res.cycle.empty(); ++u) {
        for (auto [v, neg] : g.out_edges[u]) {
            if (!neg) continue;
            std::vector<int> parent(n, -1);
            std::vector<int> queue{v};
            std::set<int> seen{v};
            for (size_t qi = 0; qi < queue.size(); ++qi) {
                int x = queue[qi];
                for (auto [y, yn] : g.out_edges[x]) {
                    if (seen.insert(y).second) {
                        parent[y] = x;
                        queue.push_back(y);
                    }
                }
            }
            if (!seen.count(u)) continue;
            std::vector<int> path;
            for (int x = u; x != -1 && x != v; x = parent[x]) path.push_back(x);
            path.push_back(v);
            std::reverse(path.begin(), path.end());
            for (int x : path) res.cycle.push_back(detail::pred_display(g.preds[x]));
            break;
        }
    }
    if (res.cycle.empty()) res.cycle.push_back("(unlocalized negation cycle)");
    return res;
}

// ---------------------------------------------------------------------------
// Closure

struct ConditionRef {
    enum class Kind { Context, Derived, Naf };
    Kind kind = Kind::Context;
    SentenceId id{};  // Context only
    Literal literal;  // always set; for Naf this is the negated literal

    friend auto operator<=>(const ConditionRef&, const ConditionRef&) = default;
};

struct Derivation {
    SentenceId rule;
    std::vector<ConditionRef> conditions;
};

struct Implication {
    Literal literal;
    int depth = 1;
    Derivation support; // one minimal-depth support
};

class Closure {
public:
    SemanticsMode mode = SemanticsMode::Cwa;
    std::map<Literal, SentenceId> fact_ids;     // context facts (first id wins)
    std::map<Literal, Implication> implications;

    bool derivable(const Literal& l) const {
        return fact_ids.count(l) || implications.count(l);
    }

    std::optional<int> depth(const Literal& l) const {
        if (fact_ids.count(l)) return 0;
        auto it = implications.find(l);
        if (it != implications.end()) return it->second.depth;
        return std::nullopt;
    }

    TruthValue truth(const Literal& q) const {
        if (derivable(q)) return TruthValue::True;
        if (derivable(q.negate())) return TruthValue::False;
        if (mode == SemanticsMode::Owa) return TruthValue::Unknown;
        return q.negated ? TruthValue::True : TruthValue::False;
    }

    int max_depth() const {
        int d = 0;
        for (const auto& [l, imp] : implications) d = std::max(d, imp.depth);
        return d;
    }
};

namespace detail {

inline std::map<Literal, SentenceId> fact_literal_ids(const Theory& t) {
    std::map<Literal, SentenceId> out;
    for (const Fact& f : t.facts()) out.emplace(f.literal, f.id);
    return out;
}

// Indexed evaluation state shared by closure() and the abduction loop.
struct EvalContext {
    std::vector<GroundRuleInstance> instances;
    StratificationResult strat;
    std::map<PredKey, int> stratum_of; // copy for lookup
};

inline EvalContext make_eval_context(const Theory& t) {
    EvalContext cx;
    cx.instances = ground_instances(t);
    cx.strat = check_stratifiable(t);
    cx.stratum_of = cx.strat.strata;
    return cx;
}

inline int instance_stratum(const EvalContext& cx, const GroundRuleInstance& gi) {
    auto it = cx.stratum_of.find(pred_key(gi.conclusion.atom));
    return it == cx.stratum_of.end() ? 0 : it->second;
}

} // namespace detail

inline Closure closure_with_context(const Theory& t, const detail::EvalContext& cx) {
    if (t.mode() == SemanticsMode::Cwa && !cx.strat.ok) {
        std::string msg = "theory is not stratifiable; negation cycle:";
        for (const auto& p : cx.strat.cycle) msg += " " + p;
        throw StratificationError(msg, cx.strat.cycle);
    }

    Closure cl;
    cl.mode = t.mode();
    cl.fact_ids = detail::fact_literal_ids(t);

    std::set<Literal> derived; // implications only
    auto known = [&](const Literal& l) { return cl.fact_ids.count(l) || derived.count(l); };

    const bool cwa = t.mode() == SemanticsMode::Cwa;
    const int strata = cwa ? cx.strat.stratum_count : 1;

    for (int k = 0; k < strata; ++k) {
        bool changed = true;
        while (changed) {
            changed = false;
            for (const auto& gi : cx.instances) {
                if (cwa && detail::instance_stratum(cx, gi) != k) continue;
                if (known(gi.conclusion)) continue;
                bool sat = true;
                for (const auto& c : gi.conditions) {
                    if (cwa && c.negated) {
                        // NAF: the positive literal must be underivable; its
                        // stratum is strictly lower, so it is already final.
                        if (known(c.negate())) { sat = false; break; }
                    } else {
                        if (!known(c)) { sat = false; break; }
                    }
                }
                if (!sat) continue;
                if (cl.fact_ids.count(gi.conclusion)) continue;
                derived.insert(gi.conclusion);
                changed = true;
            }
        }
    }

    if (t.mode() == SemanticsMode::Owa) {
        for (const Literal& l : derived)
            if (known(l.negate()))
                throw InconsistentTheoryError("theory derives a literal and its negation",
                                              l);
        for (const auto& [l, id] : cl.fact_ids)
            if (cl.fact_ids.count(l.negate()))
                throw InconsistentTheoryError("theory states a literal and its negation", l);
    }

    // Depth relaxation over the fixed derivable set:
    // depth = 1 + max(condition depths), minimized over supports; context
    // facts and NAF leaves contribute 0.
    constexpr int kInf = std::numeric_limits<int>::max() / 2;
    std::map<Literal, int> depth;
    for (const Literal& l : derived) depth[l] = kInf;

    auto cond_depth = [&](const Literal& c, bool naf) -> int {
        if (naf) return 0;
        if (cl.fact_ids.count(c)) return 0;
        auto it = depth.find(c);
        return it == depth.end() ? kInf : it->second;
    };

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& gi : cx.instances) {
            auto it = depth.find(gi.conclusion);
            if (it == depth.end()) continue;
            int worst = 0;
            bool valid = true;
            for (const auto& c : gi.conditions) {
                bool naf = cwa && c.negated;
                if (naf) {
                    if (known(c.negate())) { valid = false; break; }
                    continue;
                }
                if (!known(c)) { valid = false; break; }
                worst = std::max(worst, cond_depth(c, false));
            }
            if (!valid || worst >= kInf) continue;
            int cand = worst + 1;
            if (cand < it->second) {
                it->second = cand;
                Derivation d{gi.rule, {}};
                for (const auto& c : gi.conditions) {
                    if (cwa && c.negated)
                        d.conditions.push_back({ConditionRef::Kind::Naf, {}, c});
                    else if (auto fit = cl.fact_ids.find(c); fit != cl.fact_ids.end())
                        d.conditions.push_back({ConditionRef::Kind::Context, fit->second, c});
                    else
                        d.conditions.push_back({ConditionRef::Kind::Derived, {}, c});
                }
                cl.implications[gi.conclusion] = Implication{gi.conclusion, cand, std::move(d)};
                changed = true;
            }
        }
    }
    return cl;
}

inline Closure closure(const Theory& t) {
    return closure_with_context(t, detail::make_eval_context(t));
}

// ---------------------------------------------------------------------------
// One-step inference

struct OneStepInference {
    Literal literal;
    SentenceId rule;
    std::vector<ConditionRef> conditions;
};

// All conclusions reachable by a single rule application whose conditions
// are satisfied directly by the theory's stated facts (which, mid-iteration,
// include previously appended implications). NAF conditions are judged
// against the full stratified closure, so early steps cannot assume a fact
// false that later becomes derivable.
inline std::vector<OneStepInference> one_step_inferences(const Theory& t) {
    detail::EvalContext cx = detail::make_eval_context(t);
    Closure full = closure_with_context(t, cx);
    auto fact_ids = detail::fact_literal_ids(t);
    const bool cwa = t.mode() == SemanticsMode::Cwa;

    std::vector<OneStepInference> out;
    for (const auto& gi : cx.instances) {
        if (fact_ids.count(gi.conclusion)) continue;
        OneStepInference step{gi.conclusion, gi.rule, {}};
        bool sat = true;
        for (const auto& c : gi.conditions) {
            if (cwa && c.negated) {
                if (full.derivable(c.negate())) { sat = false; break; }
                step.conditions.push_back({ConditionRef::Kind::Naf, {}, c});
            } else {
                auto it = fact_ids.find(c);
                if (it == fact_ids.end()) { sat = false; break; }
                step.conditions.push_back({ConditionRef::Kind::Context, it->second, c});
            }
        }
        if (sat) out.push_back(std::move(step));
    }
    std::sort(out.begin(), out.end(), [](const OneStepInference& a, const OneStepInference& b) {
        if (a.rule != b.rule) return a.rule < b.rule;
        return a.conditions < b.conditions;
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const OneStepInference& a, const OneStepInference& b) {
                              return a.rule == b.rule && a.conditions == b.conditions &&
                                     a.literal == b.literal;
                          }),
              out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Question answering

struct Answer {
    TruthValue truth = TruthValue::Unknown;
    std::optional<int> depth;                 // N/A when unset
    std::optional<Literal> proved;            // the witness literal, if any
};

inline Answer answer_with_closure(const Theory& t, const Literal& q, const Closure& cl) {
    if (!q.ground()) throw InferenceError("question is not ground");
    if (cl.derivable(q)) return {TruthValue::True, cl.depth(q), q};
    Literal nq = q.negate();
    if (cl.derivable(nq)) return {TruthValue::False, cl.depth(nq), nq};
    if (t.mode() == SemanticsMode::Owa) return {TruthValue::Unknown, std::nullopt, std::nullopt};
    return {q.negated ? TruthValue::True : TruthValue::False, std::nullopt, std::nullopt};
}

inline Answer answer(const Theory& t, const Literal& q) {
    return answer_with_closure(t, q, closure(t));
}

// RuleTaker-compatibility depth for unprovable questions: the deepest failed
// backward-chaining search, cycle-cut and budget-bounded. Approximate; not
// used by any dataset export by default.
inline int failed_search_depth(const Theory& t, const Literal& q) {
    auto facts = detail::fact_literal_ids(t);
    auto instances = ground_instances(t);
    std::set<Literal> path;
    auto rec = [&](auto&& self, const Literal& l, int budget) -> int {
        if (facts.count(l) || budget <= 0 || path.count(l)) return 0;
        path.insert(l);
        int deepest = 0;
        for (const auto& gi : instances) {
            if (!(gi.conclusion == l)) continue;
            int worst = 0;
            for (const auto& c : gi.conditions) {
                Literal target = (t.mode() == SemanticsMode::Cwa && c.negated) ? c.negate() : c;
                worst = std::max(worst, self(self, target, budget - 1));
            }
            deepest = std::max(deepest, 1 + worst);
        }
        path.erase(l);
        return deepest;
    };
    Literal target = (t.mode() == SemanticsMode::Cwa && q.negated) ? q.negate() : q;
    return rec(rec, target, 20);
}

} // namespace proofwriter

#endif
