#ifndef PROOFWRITER_ABDUCTION_HPP
#define PROOFWRITER_ABDUCTION_HPP

#include <algorithm>
#include <string>
#include <vector>

#include "proofwriter/grammar.hpp"
#include "proofwriter/inference.hpp"

// Single-fact abduction over OWA theories: every alternative fact whose
// addition makes an unprovable hypothesis provable. The search *is* the
// exhaustive candidate test; the grounding and stratification work is shared
// across candidates.

namespace proofwriter {

class NotUnprovableError : public InferenceError {
public:
    using InferenceError::InferenceError;
};

struct AbductionConfig {
    bool positive_only = false; // restrict the candidate space to positive literals
};

// All ground literals over the theory's signature (attribute atoms plus
// ordered relation pairs, self-pairs included, both polarities), minus the
// literals already stated as facts.
inline std::vector<Literal> candidate_space(const Theory& t,
                                            const AbductionConfig& cfg = {}) {
    Signature sig = signature_of(t);
    auto facts = detail::fact_literal_ids(t);
    std::vector<Literal> out;
    auto add = [&](Literal l) {
        if (cfg.positive_only && l.negated) return;
        if (facts.count(l)) return;
        out.push_back(std::move(l));
    };
    for (const auto& [name, article] : sig.entities) {
        Term subj = Term::entity(name, article);
        for (const auto& attr : sig.attributes) {
            add(Literal{Atom::attribute(subj, attr), false});
            add(Literal{Atom::attribute(subj, attr), true});
        }
        for (const auto& verb : sig.verbs) {
            for (const auto& [oname, oarticle] : sig.entities) {
                Term obj = Term::entity(oname, oarticle);
                add(Literal{Atom::relation(verb, subj, obj), false});
                add(Literal{Atom::relation(verb, subj, obj), true});
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct AbductionAnswer {
    std::vector<Literal> missing_facts; // sorted by rendered text
    bool none() const { return missing_facts.empty(); }

    std::string render(const GrammarProfile& profile) const {
        if (missing_facts.empty()) return "None";
        std::string out;
        for (size_t i = 0; i < missing_facts.size(); ++i) {
            if (i) out += " , ";
            out += render_fact(missing_facts[i], profile);
        }
        return out;
    }
};

inline AbductionAnswer abduce_single_fact(const Theory& t, const Literal& q,
                                          const AbductionConfig& cfg = {}) {
    if (t.mode() != SemanticsMode::Owa)
        throw InferenceError("single-fact abduction is defined for OWA theories");
    detail::EvalContext cx = detail::make_eval_context(t);
    Closure base = closure_with_context(t, cx);
    Answer a = answer_with_closure(t, q, base);
    if (a.truth != TruthValue::Unknown)
        throw NotUnprovableError("hypothesis is already " + to_string(a.truth));

    SentenceId probe_id = t.next_id();
    AbductionAnswer result;
    for (const Literal& m : candidate_space(t, cfg)) {
        if (m == q) continue;
        Theory t2 = t.with_fact(Fact{probe_id, m});
        try {
            Closure c2 = closure_with_context(t2, cx);
            if (c2.derivable(q)) result.missing_facts.push_back(m);
        } catch (const InconsistentTheoryError&) {
            // a candidate contradicting the theory is not an alternative fact
        }
    }
    GrammarProfile profile = infer_profile(t);
    std::sort(result.missing_facts.begin(), result.missing_facts.end(),
              [&](const Literal& x, const Literal& y) {
                  return render_fact(x, profile) < render_fact(y, profile);
              });
    return result;
}

} // namespace proofwriter

#endif
