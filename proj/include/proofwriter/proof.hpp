#ifndef PROOFWRITER_PROOF_HPP
#define PROOFWRITER_PROOF_HPP

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "proofwriter/inference.hpp"
#include "proofwriter/model.hpp"

namespace proofwriter {

class ProofError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DanglingReferenceError : public ProofError {
public:
    using ProofError::ProofError;
};

// ---------------------------------------------------------------------------
// Proof DAG: alternating fact/rule structure. Rule applications live inside
// Concluded nodes; leaves are context facts or NAF assumptions.

struct ProofNode;
using ProofNodePtr = std::shared_ptr<const ProofNode>;

struct ProofNode {
    enum class Kind { Context, Naf, Concluded };
    Kind kind = Kind::Context;
    SentenceId context_id{}; // Context leaves
    Literal literal;         // Naf: the negated statement assumed to hold
    SentenceId rule{};       // Concluded
    std::vector<ProofNodePtr> antecedents; // Concluded, in rule condition order

    static ProofNodePtr context(SentenceId id, Literal lit) {
        return std::make_shared<ProofNode>(ProofNode{Kind::Context, id, std::move(lit), {}, {}});
    }
    static ProofNodePtr naf(Literal lit) {
        return std::make_shared<ProofNode>(ProofNode{Kind::Naf, {}, std::move(lit), {}, {}});
    }
    static ProofNodePtr concluded(Literal lit, SentenceId rule, std::vector<ProofNodePtr> ante) {
        return std::make_shared<ProofNode>(
            ProofNode{Kind::Concluded, {}, std::move(lit), rule, std::move(ante)});
    }
};

struct ProofDag {
    ProofNodePtr root;
    bool valid() const { return root != nullptr; }
};

namespace detail {

inline std::string literal_key(const Literal& l) {
    const Atom& a = l.atom;
    std::string s = l.negated ? "~" : "";
    if (a.kind == Atom::Kind::Attribute) return s + "a:" + a.predicate + "(" + a.subject.name + ")";
    return s + "r:" + a.predicate + "(" + a.subject.name + "," + a.object.name + ")";
}

} // namespace detail

// Canonical string form: equal strings iff isomorphic DAGs. Children are
// sorted, conc-node identity is the concluded literal (not its emission
// number). Skeleton mode drops intermediate conclusion texts so proofs can
// be compared the way systems without intermediates are scored.
inline std::string canonicalize(const ProofNode& n, bool skeleton = false) {
    switch (n.kind) {
    case ProofNode::Kind::Context: return "c[" + n.context_id.str() + "]";
    case ProofNode::Kind::Naf: return "n[" + detail::literal_key(n.literal) + "]";
    case ProofNode::Kind::Concluded: {
        std::vector<std::string> kids;
        kids.reserve(n.antecedents.size());
        for (const auto& a : n.antecedents) kids.push_back(canonicalize(*a, skeleton));
        std::sort(kids.begin(), kids.end());
        std::string s = skeleton ? std::string("f") : "f[" + detail::literal_key(n.literal) + "]";
        s += "<" + n.rule.str() + ">(";
        for (size_t i = 0; i < kids.size(); ++i) {
            if (i) s += ",";
            s += kids[i];
        }
        return s + ")";
    }
    }
    return "";
}

inline std::string canonicalize(const ProofDag& p, bool skeleton = false) {
    return p.valid() ? canonicalize(*p.root, skeleton) : "None";
}

inline int proof_depth(const ProofNode& n) {
    if (n.kind != ProofNode::Kind::Concluded) return 0;
    int worst = 0;
    for (const auto& a : n.antecedents) worst = std::max(worst, proof_depth(*a));
    return worst + 1;
}

inline int proof_depth(const ProofDag& p) { return p.valid() ? proof_depth(*p.root) : 0; }

// Distinct fact nodes plus one rule node per application. A fact is one node
// no matter how many conditions it feeds, so the count is identity-based on
// the literal, not on object sharing.
inline int proof_node_count(const ProofDag& p) {
    if (!p.valid()) return 0;
    std::set<std::pair<int, std::string>> seen;
    int rule_nodes = 0;
    auto rec = [&](auto&& self, const ProofNodePtr& n) -> void {
        std::string key = detail::literal_key(n->literal);
        if (n->kind == ProofNode::Kind::Context) key = n->context_id.str();
        if (!seen.insert({static_cast<int>(n->kind), key}).second) return;
        if (n->kind != ProofNode::Kind::Concluded) return;
        ++rule_nodes;
        for (const auto& a : n->antecedents) self(self, a);
    };
    ProofNodePtr root = p.root;
    rec(rec, root);
    return static_cast<int>(seen.size()) + rule_nodes;
}

// ---------------------------------------------------------------------------
// Exhaustive proof enumeration

struct ProofEnumeration {
    std::vector<ProofDag> proofs; // sorted by (node count, canonical form)
    bool truncated = false;       // CapExceeded
};

namespace detail {

using SupportMap = std::map<Literal, const GroundRuleInstance*>;

struct ProofSearch {
    const Theory& theory;
    const Closure& closure;
    std::map<Literal, SentenceId> fact_ids;
    std::map<Literal, std::vector<const GroundRuleInstance*>> apps;
    size_t cap;
    bool truncated = false;
    bool cwa;

    ProofSearch(const Theory& t, const Closure& cl, const std::vector<GroundRuleInstance>& gis,
                size_t cap_)
        : theory(t), closure(cl), fact_ids(fact_literal_ids(t)), cap(cap_),
          cwa(t.mode() == SemanticsMode::Cwa) {
        for (const auto& gi : gis) {
            if (fact_ids.count(gi.conclusion) || !closure.derivable(gi.conclusion)) continue;
            bool valid = true;
            for (const auto& c : gi.conditions) {
                if (cwa && c.negated) {
                    if (closure.derivable(c.negate())) { valid = false; break; }
                } else if (!closure.derivable(c)) {
                    valid = false;
                    break;
                }
            }
            if (valid) apps[gi.conclusion].push_back(&gi);
        }
    }

    std::vector<SupportMap> enumerate(const Literal& l, std::set<Literal>& path) {
        std::vector<SupportMap> out;
        auto it = apps.find(l);
        if (it == apps.end()) return out;
        path.insert(l);
        for (const GroundRuleInstance* gi : it->second) {
            std::vector<SupportMap> combos = {{}};
            bool dead = false;
            for (const auto& c : gi->conditions) {
                if (cwa && c.negated) continue;       // NAF leaf
                if (fact_ids.count(c)) continue;      // context leaf
                if (path.count(c)) { dead = true; break; }
                std::vector<SupportMap> subs = enumerate(c, path);
                if (subs.empty()) { dead = true; break; }
                std::vector<SupportMap> next;
                for (const auto& base : combos) {
                    for (const auto& sub : subs) {
                        SupportMap merged = base;
                        bool ok = true;
                        for (const auto& [lit, app] : sub) {
                            auto [pos, inserted] = merged.emplace(lit, app);
                            if (!inserted && pos->second != app) { ok = false; break; }
                        }
                        if (ok) next.push_back(std::move(merged));
                        if (next.size() > cap) { truncated = true; break; }
                    }
                    if (next.size() > cap) break;
                }
                combos = std::move(next);
                if (combos.empty()) { dead = true; break; }
            }
            if (dead) continue;
            for (auto& m : combos) {
                m[l] = gi;
                out.push_back(std::move(m));
                if (out.size() > cap) { truncated = true; break; }
            }
            if (out.size() > cap) break;
        }
        path.erase(l);
        return out;
    }

    // Materialize a support map into a DAG with shared nodes. Returns an
    // invalid dag if the merged choices form a cycle.
    ProofDag materialize(const Literal& root, const SupportMap& support) {
        std::map<Literal, ProofNodePtr> done;
        std::set<Literal> building;
        auto rec = [&](auto&& self, const Literal& l) -> ProofNodePtr {
            if (auto it = done.find(l); it != done.end()) return it->second;
            if (auto fit = fact_ids.find(l); fit != fact_ids.end()) {
                ProofNodePtr n = ProofNode::context(fit->second, l);
                done.emplace(l, n);
                return n;
            }
            if (!building.insert(l).second) return nullptr; // cycle
            auto sit = support.find(l);
            if (sit == support.end()) return nullptr;
            const GroundRuleInstance* gi = sit->second;
            std::vector<ProofNodePtr> ante;
            for (const auto& c : gi->conditions) {
                if (cwa && c.negated) {
                    ante.push_back(ProofNode::naf(c));
                    continue;
                }
                ProofNodePtr child = self(self, c);
                if (!child) return nullptr;
                ante.push_back(child);
            }
            building.erase(l);
            ProofNodePtr n = ProofNode::concluded(l, gi->rule, std::move(ante));
            done.emplace(l, n);
            return n;
        };
        return ProofDag{rec(rec, root)};
    }
};

} // namespace detail

// All distinct (non-isomorphic) proof DAGs of q, up to cap. A question that
// is itself a context fact has exactly the single-node proof.
inline ProofEnumeration all_proofs_with_closure(const Theory& t, const Literal& q,
                                                const Closure& cl,
                                                const std::vector<GroundRuleInstance>& gis,
                                                size_t cap = 5000) {
    ProofEnumeration result;
    auto fact_ids = detail::fact_literal_ids(t);
    if (auto it = fact_ids.find(q); it != fact_ids.end()) {
        result.proofs.push_back(ProofDag{ProofNode::context(it->second, q)});
        return result;
    }
    if (!cl.derivable(q)) return result;

    detail::ProofSearch search(t, cl, gis, cap);
    std::set<Literal> path;
    std::vector<detail::SupportMap> supports = search.enumerate(q, path);
    result.truncated = search.truncated;

    std::set<std::string> seen;
    std::vector<std::pair<std::pair<int, std::string>, ProofDag>> ranked;
    for (const auto& m : supports) {
        ProofDag dag = search.materialize(q, m);
        if (!dag.valid()) continue;
        std::string canon = canonicalize(dag);
        if (!seen.insert(canon).second) continue;
        ranked.push_back({{proof_node_count(dag), canon}, dag});
    }
    std::sort(ranked.begin(), ranked.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (ranked.size() > cap) {
        ranked.resize(cap);
        result.truncated = true;
    }
    for (auto& [key, dag] : ranked) result.proofs.push_back(std::move(dag));
    return result;
}

inline ProofEnumeration all_proofs(const Theory& t, const Literal& q, size_t cap = 5000) {
    return all_proofs_with_closure(t, q, closure(t), ground_instances(t), cap);
}

// Subset minimizing node count; ties all retained.
inline std::vector<ProofDag> shortest_proofs(const std::vector<ProofDag>& ps) {
    std::vector<ProofDag> out;
    if (ps.empty()) return out;
    int best = proof_node_count(ps.front());
    for (const auto& p : ps) best = std::min(best, proof_node_count(p));
    for (const auto& p : ps)
        if (proof_node_count(p) == best) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------
// Step-wise verification

struct VerifiedReport {
    enum class Status { FullyVerified, PartiallyVerified, Failed };
    Status status = Status::FullyVerified;
    std::string failed_step;                  // set when Failed
    std::vector<std::string> unverified_nafs; // set when PartiallyVerified

    bool fully_verified() const { return status == Status::FullyVerified; }
};

// Re-checks every rule application on its own micro-theory (the rule plus
// its condition facts) and every NAF leaf against the full theory's closure.
// With check_naf_full_theory=false NAF leaves are left unverified and the
// report degrades to PartiallyVerified.
inline VerifiedReport verify_proof(const ProofDag& p, const Theory& t,
                                   bool check_naf_full_theory = true) {
    VerifiedReport report;
    if (!p.valid()) {
        report.status = VerifiedReport::Status::Failed;
        report.failed_step = "empty proof";
        return report;
    }
    std::optional<Closure> full;
    if (check_naf_full_theory) full = closure(t);

    std::set<const ProofNode*> visited;
    auto fail = [&](const std::string& why) {
        report.status = VerifiedReport::Status::Failed;
        if (report.failed_step.empty()) report.failed_step = why;
    };

    auto rec = [&](auto&& self, const ProofNodePtr& n) -> void {
        if (report.status == VerifiedReport::Status::Failed) return;
        if (!visited.insert(n.get()).second) return;
        switch (n->kind) {
        case ProofNode::Kind::Context: {
            const TheorySentence* s = t.find(n->context_id);
            const Fact* f = s ? std::get_if<Fact>(s) : nullptr;
            if (!f || !(f->literal == n->literal))
                fail("context leaf " + n->context_id.str() + " does not match the theory");
            return;
        }
        case ProofNode::Kind::Naf: {
            if (!check_naf_full_theory) {
                report.unverified_nafs.push_back(detail::literal_key(n->literal));
                return;
            }
            if (full->derivable(n->literal.negate()))
                fail("NAF leaf " + detail::literal_key(n->literal) +
                     " is derivable from the theory");
            return;
        }
        case ProofNode::Kind::Concluded: {
            const TheorySentence* s = t.find(n->rule);
            const Rule* r = s ? std::get_if<Rule>(s) : nullptr;
            if (!r) {
                fail("rule " + n->rule.str() + " is not in the theory");
                return;
            }
            std::vector<TheorySentence> micro;
            micro.push_back(*r);
            int idx = 1;
            for (const auto& a : n->antecedents) {
                if (a->kind == ProofNode::Kind::Naf) continue;
                micro.push_back(Fact{SentenceId{IdSpace::Fact, idx++}, a->literal});
            }
            bool confirmed = false;
            try {
                Theory m = Theory::make(std::move(micro), t.mode());
                for (const auto& step : one_step_inferences(m))
                    confirmed = confirmed || step.literal == n->literal;
            } catch (const std::exception&) {
                confirmed = false;
            }
            if (!confirmed) {
                fail("step concluding " + detail::literal_key(n->literal) + " via " +
                     n->rule.str() + " is not a valid one-step inference");
                return;
            }
            for (const auto& a : n->antecedents) self(self, a);
            return;
        }
        }
    };
    ProofNodePtr root = p.root;
    rec(rec, root);
    if (report.status != VerifiedReport::Status::Failed && !report.unverified_nafs.empty())
        report.status = VerifiedReport::Status::PartiallyVerified;
    return report;
}

// ---------------------------------------------------------------------------
// Assembly of iterative 1-step fragments into a full proof

struct StepFragment {
    SentenceId assigned_id;  // the id the implication received in the context
    Literal implication;
    SentenceId rule;
    std::vector<ConditionRef> conditions;
};

inline ProofDag assemble_iterative_proof(const Theory& base,
                                         const std::vector<StepFragment>& chain,
                                         const Literal& target) {
    std::map<SentenceId, size_t> by_id;
    size_t target_idx = chain.size();
    for (size_t i = 0; i < chain.size(); ++i) {
        by_id[chain[i].assigned_id] = i;
        if (chain[i].implication == target && target_idx == chain.size()) target_idx = i;
    }
    if (target_idx == chain.size())
        throw DanglingReferenceError("target is not among the chain's implications");

    std::vector<ProofNodePtr> memo(chain.size());
    auto rec = [&](auto&& self, size_t idx) -> ProofNodePtr {
        if (memo[idx]) return memo[idx];
        const StepFragment& frag = chain[idx];
        std::vector<ProofNodePtr> ante;
        for (const auto& c : frag.conditions) {
            switch (c.kind) {
            case ConditionRef::Kind::Naf:
                ante.push_back(ProofNode::naf(c.literal));
                break;
            case ConditionRef::Kind::Derived:
            case ConditionRef::Kind::Context: {
                auto it = by_id.find(c.id);
                if (it != by_id.end() && it->second < idx) {
                    ante.push_back(self(self, it->second));
                    break;
                }
                const TheorySentence* s = base.find(c.id);
                const Fact* f = s ? std::get_if<Fact>(s) : nullptr;
                if (!f)
                    throw DanglingReferenceError("fragment condition references unknown id " +
                                                 c.id.str());
                ante.push_back(ProofNode::context(c.id, f->literal));
                break;
            }
            }
        }
        memo[idx] = ProofNode::concluded(frag.implication, frag.rule, std::move(ante));
        return memo[idx];
    };
    return ProofDag{rec(rec, target_idx)};
}

} // namespace proofwriter

#endif
