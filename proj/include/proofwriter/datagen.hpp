#ifndef PROOFWRITER_DATAGEN_HPP
#define PROOFWRITER_DATAGEN_HPP

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "proofwriter/abduction.hpp"
#include "proofwriter/codec.hpp"
#include "proofwriter/dataset.hpp"
#include "proofwriter/grammar.hpp"
#include "proofwriter/inference.hpp"
#include "proofwriter/proof.hpp"
#include "proofwriter/rng.hpp"

// Seeded generation of D*-style theories and the four derived datasets.
// Everything is a pure function of (config, seed).

namespace proofwriter {

class GenerationExhausted : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GenRange {
    int min = 0, max = 0;
    int draw(Rng& rng) const { return rng.range(min, max); }
};

struct GenConfig {
    SemanticsMode mode = SemanticsMode::Cwa;
    int target_depth = 3; // 0|1|2|3|5
    GenRange entities{2, 4};
    GenRange attributes{5, 7};
    GenRange verbs{0, 0};
    GenRange facts{4, 8};
    GenRange rules{6, 9};
    GrammarProfile profile = people_profile();
    double negation_prob = 0.15;
    double variable_rule_prob = 0.75;
    double relation_prob = 0.0;     // chance an atom is a relation (needs verbs)
    double two_condition_prob = 0.35;
    uint64_t seed = 0;
    int max_implications = 25;
    int retry_budget = 500;
    double unprovable_ratio = 0.4;
    int questions_per_theory = 8;
    int abduction_questions_per_theory = 6;
    bool abduction_positive_questions = true;
    size_t proof_cap = 5000;
};

// Depth-5 closed-world preset tuned against the original D5 statistics:
// implications per theory mean ~10, max capped at 25, depths up to 10.
inline GenConfig d5_cwa_config(uint64_t seed) {
    GenConfig cfg;
    cfg.mode = SemanticsMode::Cwa;
    cfg.target_depth = 5;
    cfg.entities = {3, 4};
    cfg.attributes = {7, 9};
    cfg.facts = {5, 7};
    cfg.rules = {8, 11};
    cfg.negation_prob = 0.10;
    cfg.variable_rule_prob = 0.8;
    cfg.two_condition_prob = 0.3;
    cfg.seed = seed;
    return cfg;
}

inline GenConfig owa_config(uint64_t seed, int depth) {
    GenConfig cfg;
    cfg.mode = SemanticsMode::Owa;
    cfg.target_depth = depth;
    cfg.negation_prob = 0.2;
    cfg.seed = seed;
    return cfg;
}

// Depth-3 open-world preset for abduction batches, tuned so the mean number
// of missing facts per question sits near the original D3-Ab ~1.1.
inline GenConfig d3_abduction_config(uint64_t seed) {
    GenConfig cfg;
    cfg.mode = SemanticsMode::Owa;
    cfg.target_depth = 3;
    cfg.entities = {2, 4};
    cfg.attributes = {5, 6};
    cfg.facts = {3, 4};
    cfg.rules = {12, 15};
    cfg.variable_rule_prob = 0.92;
    cfg.negation_prob = 0.12;
    cfg.two_condition_prob = 0.2;
    cfg.seed = seed;
    return cfg;
}

namespace detail {

struct GenVocab {
    std::vector<Term> entities;
    std::vector<std::string> attributes;
    std::vector<std::string> verbs;
};

inline GenVocab draw_vocab(const GenConfig& cfg, Rng& rng) {
    GenVocab v;
    auto names = rng.sample(cfg.profile.entity_pool, static_cast<size_t>(cfg.entities.draw(rng)));
    std::sort(names.begin(), names.end());
    for (const auto& n : names) v.entities.push_back(Term::entity(n, cfg.profile.entity_article()));
    v.attributes = rng.sample(cfg.profile.attribute_pool,
                              static_cast<size_t>(cfg.attributes.draw(rng)));
    std::sort(v.attributes.begin(), v.attributes.end());
    if (cfg.verbs.max > 0) {
        std::vector<std::string> bases;
        for (const auto& third : cfg.profile.verb_pool) {
            if (auto b = base_of_third_person(third)) bases.push_back(*b);
        }
        v.verbs = rng.sample(bases, static_cast<size_t>(cfg.verbs.draw(rng)));
        std::sort(v.verbs.begin(), v.verbs.end());
    }
    return v;
}

inline Atom draw_atom(const GenVocab& v, const GenConfig& cfg, Rng& rng,
                      std::optional<Term> subject) {
    Term subj = subject ? *subject : v.entities[rng.below(v.entities.size())];
    bool relation =
        !v.verbs.empty() && (v.attributes.empty() || rng.chance(cfg.relation_prob));
    if (relation) {
        const Term& obj = v.entities[rng.below(v.entities.size())];
        return Atom::relation(v.verbs[rng.below(v.verbs.size())], subj, obj);
    }
    return Atom::attribute(subj, v.attributes[rng.below(v.attributes.size())]);
}

inline std::optional<Theory> try_gen_theory(const GenConfig& cfg, Rng& rng) {
    GenVocab vocab = draw_vocab(cfg, rng);
    if (vocab.entities.empty() || (vocab.attributes.empty() && vocab.verbs.empty()))
        return std::nullopt;
    std::vector<TheorySentence> sentences;
    int next_id = 1;

    int n_facts = cfg.facts.draw(rng);
    std::set<Literal> fact_set;
    for (int i = 0; i < n_facts; ++i) {
        Atom a = draw_atom(vocab, cfg, rng, std::nullopt);
        bool neg = cfg.mode == SemanticsMode::Owa && rng.chance(cfg.negation_prob);
        Literal lit{a, neg};
        if (fact_set.count(lit) || fact_set.count(lit.negate())) continue;
        fact_set.insert(lit);
        sentences.push_back(Fact{SentenceId{IdSpace::Sent, next_id++}, lit});
    }

    int n_rules = cfg.rules.draw(rng);
    for (int i = 0; i < n_rules; ++i) {
        Rule r;
        r.id = SentenceId{IdSpace::Sent, next_id++};
        bool variable = rng.chance(cfg.variable_rule_prob);
        Term subj = variable ? Term::variable() : vocab.entities[rng.below(vocab.entities.size())];

        int n_conds = 1 + (rng.chance(cfg.two_condition_prob) ? 1 : 0);
        std::set<Literal> conds;
        for (int c = 0; c < n_conds; ++c) {
            Atom a = draw_atom(vocab, cfg, rng, subj);
            // first condition stays positive so a rule variable is always
            // bound by a positive condition
            bool neg = c > 0 && rng.chance(cfg.negation_prob);
            Literal lit{a, neg};
            if (conds.count(lit) || conds.count(lit.negate())) continue;
            conds.insert(lit);
            r.conditions.push_back(lit);
        }
        if (r.conditions.empty()) continue;

        bool concl_on_subject = !variable || rng.chance(0.85);
        Term concl_subj = concl_on_subject
                              ? subj
                              : vocab.entities[rng.below(vocab.entities.size())];
        Atom concl = draw_atom(vocab, cfg, rng, concl_subj);
        bool concl_neg = cfg.mode == SemanticsMode::Owa && rng.chance(cfg.negation_prob);
        r.conclusion = Literal{concl, concl_neg};
        if (r.conclusion == r.conditions[0]) continue;

        bool attr_shape = variable && !r.conclusion.negated &&
                          r.conclusion.atom.kind == Atom::Kind::Attribute &&
                          r.conclusion.atom.subject.is_variable();
        for (const auto& c : r.conditions)
            attr_shape = attr_shape && !c.negated && c.atom.kind == Atom::Kind::Attribute &&
                         c.atom.subject.is_variable();
        if (attr_shape) {
            double roll = rng.unit();
            if (r.conditions.size() >= 2)
                r.surface = roll < 0.5 ? RuleSurface::AdjListAre : RuleSurface::IfThen;
            else if (roll < 0.3)
                r.surface = RuleSurface::AllAre;
            else if (roll < 0.5)
                r.surface = RuleSurface::BareAre;
            else
                r.surface = RuleSurface::IfThen;
        }
        sentences.push_back(std::move(r));
    }

    Theory t;
    try {
        t = Theory::make(std::move(sentences), cfg.mode);
    } catch (const ModelError&) {
        return std::nullopt;
    }
    if (!check_stratifiable(t).ok) return std::nullopt;

    Closure cl;
    try {
        cl = closure(t);
    } catch (const InferenceError&) {
        return std::nullopt;
    }
    int n_impl = static_cast<int>(cl.implications.size());
    if (n_impl > cfg.max_implications) return std::nullopt;
    if (cl.max_depth() < cfg.target_depth) return std::nullopt;
    return t;
}

} // namespace detail

// Rejection-samples until the theory meets the mode constraints and reaches
// the target depth. Deterministic in (cfg, cfg.seed).
inline Theory gen_theory(const GenConfig& cfg) {
    Rng rng(cfg.seed);
    for (int attempt = 0; attempt < cfg.retry_budget; ++attempt) {
        if (auto t = detail::try_gen_theory(cfg, rng)) return *t;
    }
    throw GenerationExhausted("no admissible theory within the retry budget");
}

// ---------------------------------------------------------------------------
// Derived examples

namespace detail {

inline std::vector<std::pair<std::string, std::string>> surface_theory(
    const Theory& t, const GrammarProfile& profile) {
    std::vector<std::pair<std::string, std::string>> rows;
    for (const auto& s : t.sentences())
        rows.push_back({sentence_id(s).str(), render_sentence(s, profile)});
    return rows;
}

inline std::vector<std::string> encode_all_proofs(const Theory& t, const Literal& witness,
                                                  const Closure& cl,
                                                  const std::vector<GroundRuleInstance>& gis,
                                                  const GrammarProfile& profile,
                                                  ProofDialect dialect, size_t cap) {
    std::vector<std::string> out;
    for (const auto& p : all_proofs_with_closure(t, witness, cl, gis, cap).proofs)
        out.push_back(encode_proof_str(p, dialect, profile));
    return out;
}

} // namespace detail

// Balanced question set over one theory: provable questions across depths up
// to the target, unprovable ones at the configured ratio, polarity
// alternating so labels stay near uniform.
inline std::vector<DatasetExample> gen_qa_examples(const Theory& t, const GenConfig& cfg,
                                                   const std::string& theory_id,
                                                   ProofDialect dialect = ProofDialect::PercentConc) {
    Rng rng(cfg.seed ^ fnv1a(theory_id));
    GrammarProfile profile = cfg.profile;
    Closure cl = closure(t);
    auto gis = ground_instances(t);

    std::map<int, std::vector<Literal>> provable_by_depth;
    for (const auto& [lit, id] : cl.fact_ids) provable_by_depth[0].push_back(lit);
    for (const auto& [lit, imp] : cl.implications)
        if (imp.depth <= cfg.target_depth) provable_by_depth[imp.depth].push_back(lit);

    std::vector<Literal> unknowns;
    for (const Literal& c : candidate_space(t)) {
        if (c.negated) continue;
        if (!cl.derivable(c) && !cl.derivable(c.negate())) unknowns.push_back(c);
    }

    std::vector<DatasetExample> out;
    int q_index = 0;
    std::set<Literal> asked;
    auto emit = [&](const Literal& q, TruthValue truth, std::optional<int> depth,
                    const std::optional<Literal>& witness) {
        if (!asked.insert(q).second) return;
        DatasetExample e;
        e.id = theory_id + "-q" + std::to_string(++q_index);
        e.theory = detail::surface_theory(t, profile);
        e.question = render_question(q, profile);
        e.answer = to_string(truth);
        e.depth = depth;
        if (witness)
            e.proofs = detail::encode_all_proofs(t, *witness, cl, gis, profile, dialect,
                                                 cfg.proof_cap);
        e.task = TaskKind::Qa;
        e.mode = t.mode();
        out.push_back(std::move(e));
    };

    int total = cfg.questions_per_theory;
    int n_unprovable = static_cast<int>(total * cfg.unprovable_ratio + 0.5);
    int n_provable = total - n_unprovable;

    std::vector<int> depths_with_support;
    for (auto& [d, lits] : provable_by_depth)
        if (!lits.empty()) depths_with_support.push_back(d);

    for (int i = 0; i < n_provable && !depths_with_support.empty(); ++i) {
        int d = depths_with_support[i % depths_with_support.size()];
        auto& pool = provable_by_depth[d];
        const Literal& lit = pool[rng.below(pool.size())];
        if (!rng.chance(0.5)) {
            emit(lit, TruthValue::True, d, lit);
        } else {
            emit(lit.negate(), TruthValue::False, d, lit);
        }
    }
    for (int i = 0; i < n_unprovable && !unknowns.empty(); ++i) {
        const Literal& u = unknowns[rng.below(unknowns.size())];
        bool negate = rng.chance(0.5);
        Literal q = negate ? u.negate() : u;
        if (t.mode() == SemanticsMode::Owa) {
            emit(q, TruthValue::Unknown, std::nullopt, std::nullopt);
        } else {
            emit(q, negate ? TruthValue::True : TruthValue::False, std::nullopt, std::nullopt);
        }
    }
    return out;
}

// One randomized but dependency-respecting linearization: k implications
// yield k+1 examples, the last one closing with "None".
inline std::vector<DatasetExample> gen_iterative_examples(const Theory& t, const GenConfig& cfg,
                                                          const std::string& theory_id) {
    Rng rng(cfg.seed ^ fnv1a(theory_id + "#iter"));
    GrammarProfile profile = cfg.profile;
    std::vector<DatasetExample> out;
    Theory cur = t;
    int step_index = 0;
    while (true) {
        auto steps = one_step_inferences(cur);
        DatasetExample e;
        e.id = theory_id + "-i" + std::to_string(++step_index);
        e.theory = detail::surface_theory(cur, profile);
        e.question = kIterativeQuestion;
        e.task = TaskKind::IterativeStep;
        e.mode = t.mode();
        if (steps.empty()) {
            e.answer = "None";
            e.proofs = {"None"};
            e.depth = std::nullopt;
            out.push_back(std::move(e));
            break;
        }
        const OneStepInference& step = steps[rng.below(steps.size())];
        e.answer = render_fact(step.literal, profile);
        e.proofs = {encode_step_proof(step, profile)};
        e.depth = 1;
        out.push_back(std::move(e));
        cur = cur.with_fact(Fact{cur.next_id(), step.literal});
    }
    return out;
}

// All implications, ordered by (depth, rendered text).
inline DatasetExample gen_enumeration_example(const Theory& t, const GenConfig& cfg,
                                              const std::string& theory_id) {
    GrammarProfile profile = cfg.profile;
    Closure cl = closure(t);
    std::vector<std::pair<std::pair<int, std::string>, std::string>> rows;
    for (const auto& [lit, imp] : cl.implications) {
        std::string text = render_fact(lit, profile);
        rows.push_back({{imp.depth, text}, text});
    }
    std::sort(rows.begin(), rows.end());
    DatasetExample e;
    e.id = theory_id + "-enum";
    e.theory = detail::surface_theory(t, profile);
    e.question = kEnumerationQuestion;
    e.task = TaskKind::Enumeration;
    e.mode = t.mode();
    if (rows.empty()) {
        e.answer = "None";
    } else {
        std::string joined;
        for (size_t i = 0; i < rows.size(); ++i) {
            if (i) joined += " ";
            joined += rows[i].second;
        }
        e.answer = joined;
    }
    return e;
}

// For sampled Unknown-valued hypotheses: the exhaustive missing-fact set,
// each fact annotated with the depth of the completed proof.
inline std::vector<DatasetExample> gen_abduction_examples(const Theory& t, const GenConfig& cfg,
                                                          const std::string& theory_id) {
    if (t.mode() != SemanticsMode::Owa)
        throw InferenceError("abduction datasets are built from OWA theories");
    Rng rng(cfg.seed ^ fnv1a(theory_id + "#ab"));
    GrammarProfile profile = cfg.profile;
    Closure cl = closure(t);

    std::vector<Literal> unknowns;
    for (const Literal& c : candidate_space(t)) {
        if (cfg.abduction_positive_questions && c.negated) continue;
        if (!cl.derivable(c) && !cl.derivable(c.negate())) unknowns.push_back(c);
    }
    rng.shuffle(unknowns);
    if (unknowns.size() > static_cast<size_t>(cfg.abduction_questions_per_theory))
        unknowns.resize(cfg.abduction_questions_per_theory);

    std::vector<DatasetExample> out;
    int q_index = 0;
    for (const Literal& q : unknowns) {
        AbductionAnswer ans = abduce_single_fact(t, q);
        DatasetExample e;
        e.id = theory_id + "-a" + std::to_string(++q_index);
        e.theory = detail::surface_theory(t, profile);
        e.question = render_fact(q, profile);
        e.answer = ans.render(profile);
        e.task = TaskKind::Abduction;
        e.mode = t.mode();
        std::optional<int> min_depth;
        for (const Literal& m : ans.missing_facts) {
            Theory t2 = t.with_fact(Fact{t.next_id(), m});
            Answer a = answer(t2, q);
            e.fact_depths.push_back(a.depth);
            if (a.depth && (!min_depth || *a.depth < *min_depth)) min_depth = a.depth;
        }
        e.depth = min_depth;
        out.push_back(std::move(e));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Batch generation with 70/10/20 hash splits

enum class Split { Train, Dev, Test };

inline Split split_of(const std::string& theory_id) {
    uint64_t h = fnv1a(theory_id) % 10;
    if (h < 7) return Split::Train;
    if (h < 8) return Split::Dev;
    return Split::Test;
}

inline std::string to_string(Split s) {
    switch (s) {
    case Split::Train: return "train";
    case Split::Dev: return "dev";
    case Split::Test: return "test";
    }
    return "";
}

struct GeneratedBatch {
    std::vector<Theory> theories;
    std::vector<std::string> theory_ids;
    std::vector<DatasetExample> examples;
};

// Iterative training mixes lower-depth theories in so sequences with few
// conclusions stay represented: every theory at the target depth plus
// round(mix_ratio * n) extra theories at each shallower depth.
inline GeneratedBatch gen_iterative_mixed_batch(const GenConfig& cfg, int n_theories,
                                                double mix_ratio = 0.2);

namespace detail {

inline void append_batch(GeneratedBatch& into, GeneratedBatch&& part) {
    into.theories.insert(into.theories.end(), part.theories.begin(), part.theories.end());
    into.theory_ids.insert(into.theory_ids.end(), part.theory_ids.begin(),
                           part.theory_ids.end());
    into.examples.insert(into.examples.end(), part.examples.begin(), part.examples.end());
}

} // namespace detail

inline GeneratedBatch gen_batch(const GenConfig& cfg, int n_theories, TaskKind task) {
    GeneratedBatch batch;
    for (int i = 0; i < n_theories; ++i) {
        GenConfig tc = cfg;
        tc.seed = fnv1a(std::to_string(cfg.seed) + "/" + std::to_string(i));
        Theory t = gen_theory(tc);
        std::string tid = to_string(cfg.mode) + "-d" + std::to_string(cfg.target_depth) + "-t" +
                          std::to_string(i);
        batch.theories.push_back(t);
        batch.theory_ids.push_back(tid);
        switch (task) {
        case TaskKind::Qa: {
            auto rows = gen_qa_examples(t, tc, tid);
            batch.examples.insert(batch.examples.end(), rows.begin(), rows.end());
            break;
        }
        case TaskKind::IterativeStep: {
            auto rows = gen_iterative_examples(t, tc, tid);
            batch.examples.insert(batch.examples.end(), rows.begin(), rows.end());
            break;
        }
        case TaskKind::Enumeration:
            batch.examples.push_back(gen_enumeration_example(t, tc, tid));
            break;
        case TaskKind::Abduction: {
            auto rows = gen_abduction_examples(t, tc, tid);
            batch.examples.insert(batch.examples.end(), rows.begin(), rows.end());
            break;
        }
        }
    }
    return batch;
}

inline GeneratedBatch gen_iterative_mixed_batch(const GenConfig& cfg, int n_theories,
                                                double mix_ratio) {
    GeneratedBatch batch = gen_batch(cfg, n_theories, TaskKind::IterativeStep);
    int extra = static_cast<int>(n_theories * mix_ratio + 0.5);
    for (int d = 0; d < cfg.target_depth; ++d) {
        GenConfig lower = cfg;
        lower.target_depth = d;
        lower.seed = fnv1a(std::to_string(cfg.seed) + "/mix-d" + std::to_string(d));
        detail::append_batch(batch, gen_batch(lower, extra, TaskKind::IterativeStep));
    }
    return batch;
}

} // namespace proofwriter

#endif
