#ifndef PROOFWRITER_GENERATOR_HPP
#define PROOFWRITER_GENERATOR_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "proofwriter/codec.hpp"
#include "proofwriter/grammar.hpp"
#include "proofwriter/inference.hpp"
#include "proofwriter/proof.hpp"
#include "proofwriter/rng.hpp"
#include "proofwriter/t5.hpp"

namespace proofwriter {

class GeneratorError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class RemoteUnavailableError : public GeneratorError {
public:
    using GeneratorError::GeneratorError;
};
class MalformedResponseError : public GeneratorError {
public:
    using GeneratorError::GeneratorError;
};
class UnknownIdInProofError : public MalformedResponseError {
public:
    using MalformedResponseError::MalformedResponseError;
};
class IterationLimitError : public GeneratorError {
public:
    using GeneratorError::GeneratorError;
};
class ContextLimitError : public GeneratorError {
public:
    using GeneratorError::GeneratorError;
};

// The one-step generator boundary: anything that maps "theory so far" to one
// new single-hop implication with its 1-step proof, or "None" at fixpoint.
struct OneStepRequest {
    std::string context; // "sent1: ... sent2: ..."
    std::string question = kIterativeQuestion;

    std::string to_t5() const {
        return format_t5_input({TaskKind::IterativeStep, question, context});
    }
};

struct OneStepResponse {
    std::string answer; // sentence or "None"
    std::string proof;  // "# sent2 sent12" or "None"
    bool is_none() const { return answer == "None"; }
};

class OneStepBackend {
public:
    virtual ~OneStepBackend() = default;
    virtual OneStepResponse next(const OneStepRequest& req) = 0;
    virtual std::string name() const = 0;
};

// ---------------------------------------------------------------------------
// Symbolic backend: the inference engine behind the wire contract.

class SymbolicBackend : public OneStepBackend {
public:
    SymbolicBackend(SemanticsMode mode, GrammarProfile profile,
                    std::optional<uint64_t> shuffle_seed = std::nullopt)
        : mode_(mode), profile_(std::move(profile)), seed_(shuffle_seed) {}

    OneStepResponse next(const OneStepRequest& req) override {
        Theory t = parse_context(req.context, mode_, profile_);
        std::vector<OneStepInference> steps = one_step_inferences(t);
        if (steps.empty()) return {"None", "None"};
        size_t pick = 0;
        if (seed_) {
            // vary the pick across loop iterations but stay seed-deterministic
            Rng rng(*seed_ ^ (0x9e3779b97f4a7c15ULL * (t.sentences().size() + 1)));
            pick = rng.below(steps.size());
        }
        const OneStepInference& step = steps[pick];
        return {render_fact(step.literal, profile_), encode_step_proof(step, profile_)};
    }

    std::string name() const override { return "symbolic"; }

private:
    SemanticsMode mode_;
    GrammarProfile profile_;
    std::optional<uint64_t> seed_;
};

// ---------------------------------------------------------------------------
// Iterative loop: exhaustive forward chaining by repeated 1-step generation.

struct LoopLimits {
    int max_iterations = 200;
    std::optional<int> max_context_tokens; // whitespace tokens of the T5 input
};

struct LoopStep {
    SentenceId assigned_id;
    OneStepResponse response;
};

struct LoopResult {
    TruthValue truth = TruthValue::Unknown;
    ProofDag proof;                   // invalid when no proof exists
    std::vector<StepFragment> chain;  // every accepted implication, in order
    std::vector<LoopStep> trace;
};

namespace detail {

inline int whitespace_token_count(const std::string& s) {
    int n = 0;
    bool in_tok = false;
    for (char c : s) {
        bool sp = c == ' ' || c == '\t' || c == '\n';
        if (!sp && !in_tok) ++n;
        in_tok = !sp;
    }
    return n;
}

} // namespace detail

// Question resolution against a completed chain: the question among the
// generated implications answers True with its assembled proof, its negation
// answers False, and anything else falls to the mode's default.
struct LoopResolution {
    TruthValue truth = TruthValue::Unknown;
    ProofDag proof;
};

inline LoopResolution resolve_loop_answer(const Theory& base,
                                          const std::vector<StepFragment>& chain,
                                          const Literal& q) {
    auto fact_ids = detail::fact_literal_ids(base);
    auto resolve = [&](const Literal& target) -> std::optional<ProofDag> {
        if (auto it = fact_ids.find(target); it != fact_ids.end())
            return ProofDag{ProofNode::context(it->second, target)};
        for (const auto& frag : chain)
            if (frag.implication == target) return assemble_iterative_proof(base, chain, target);
        return std::nullopt;
    };
    if (auto p = resolve(q)) return {TruthValue::True, *p};
    if (auto np = resolve(q.negate())) return {TruthValue::False, *np};
    if (base.mode() == SemanticsMode::Owa) return {TruthValue::Unknown, ProofDag{}};
    return {q.negated ? TruthValue::True : TruthValue::False, ProofDag{}};
}

inline LoopResult run_iterative_loop(const Theory& base, const Literal& q,
                                     OneStepBackend& backend, const LoopLimits& limits = {},
                                     std::optional<GrammarProfile> profile_opt = std::nullopt) {
    GrammarProfile profile = profile_opt ? *profile_opt : infer_profile(base);
    Theory working = base;
    LoopResult result;

    for (int iter = 0;; ++iter) {
        if (iter >= limits.max_iterations)
            throw IterationLimitError("iterative loop exceeded max iterations");
        OneStepRequest req{render_context(working, profile)};
        if (limits.max_context_tokens &&
            detail::whitespace_token_count(req.to_t5()) > *limits.max_context_tokens)
            throw ContextLimitError("iterative loop exceeded the context token limit");
        OneStepResponse resp = backend.next(req);
        if (resp.is_none()) break;

        Literal lit;
        try {
            TheorySentence s = parse_sentence(resp.answer, profile);
            const Fact* f = std::get_if<Fact>(&s);
            if (!f) throw MalformedResponseError("generated implication is not a fact sentence");
            lit = f->literal;
        } catch (const ParseError& e) {
            throw MalformedResponseError(std::string("unparseable implication: ") + e.what());
        }
        if (base.mode() == SemanticsMode::Cwa && lit.negated)
            throw MalformedResponseError("negated implication under closed-world semantics");

        StepFragment frag;
        try {
            frag = decode_step_proof(resp.proof, lit, working, profile);
        } catch (const UnknownSentenceIdError& e) {
            throw UnknownIdInProofError(e.what());
        } catch (const MalformedProofError& e) {
            throw MalformedResponseError(std::string("bad 1-step proof: ") + e.what());
        }
        frag.assigned_id = working.next_id();
        working = working.with_fact(Fact{frag.assigned_id, lit});
        result.chain.push_back(frag);
        result.trace.push_back({frag.assigned_id, resp});
    }

    LoopResolution res = resolve_loop_answer(base, result.chain, q);
    result.truth = res.truth;
    result.proof = res.proof;
    return result;
}

} // namespace proofwriter

#endif
