#ifndef PROOFWRITER_CODEC_HPP
#define PROOFWRITER_CODEC_HPP

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "proofwriter/grammar.hpp"
#include "proofwriter/proof.hpp"

// Linear proof encoding: Polish notation over '#' (inverse implication),
// '&' (condition conjunction), and rule%conc / rule@int markers, with a
// trailing "with" clause binding conc*/int*/naf* ids to sentences.
//
// The two dialects differ in more than the marker symbol: at-int always
// lists the proof root first; percent-conc lists linear chains deepest step
// first (so conc1 is the first-derived intermediate) and falls back to
// root-first for branching proofs. The decoder recognizes chain-shaped
// percent bodies and applies the reversed reading.

namespace proofwriter {

enum class ProofDialect { PercentConc, AtInt };

class MalformedProofError : public ProofError {
public:
    using ProofError::ProofError;
};

class UnboundIntermediateError : public MalformedProofError {
public:
    using MalformedProofError::MalformedProofError;
};

class UnknownSentenceIdError : public MalformedProofError {
public:
    using MalformedProofError::MalformedProofError;
};

struct EncodedProof {
    std::string body;                                        // "None" when no proof
    std::vector<std::pair<std::string, std::string>> bindings; // (id, sentence)

    std::string str() const {
        if (bindings.empty()) return body;
        std::string out = body + " ; with ";
        for (size_t i = 0; i < bindings.size(); ++i) {
            if (i) out += " ; ";
            out += bindings[i].first + ": " + bindings[i].second;
        }
        return out;
    }
};

namespace detail {

struct Emitter {
    ProofDialect dialect;
    const GrammarProfile& profile;
    std::vector<std::string> tokens;
    std::vector<std::pair<std::string, std::string>> bindings;
    int conc_counter = 0;
    int naf_counter = 0;
    std::map<const ProofNode*, std::string> conc_ids;
    std::map<Literal, std::string> naf_ids;

    std::string conc_prefix() const {
        return dialect == ProofDialect::PercentConc ? "conc" : "int";
    }
    char conc_sep() const { return dialect == ProofDialect::PercentConc ? '%' : '@'; }

    std::string bind_conc(const ProofNode* n) {
        std::string id = conc_prefix() + std::to_string(++conc_counter);
        conc_ids[n] = id;
        bindings.push_back({id, render_fact(n->literal, profile)});
        return id;
    }

    std::string bind_naf(const Literal& l) {
        auto it = naf_ids.find(l);
        if (it != naf_ids.end()) return it->second;
        std::string id = "naf" + std::to_string(++naf_counter);
        naf_ids.emplace(l, id);
        bindings.push_back({id, render_fact(l, profile)});
        return id;
    }

    // Left-nested '&' over k arguments: k-1 '&' tokens, then the arguments.
    void emit_args(const std::vector<ProofNodePtr>& args) {
        for (size_t i = 1; i < args.size(); ++i) tokens.push_back("&");
        for (const auto& a : args) emit_node(a);
    }

    void emit_node(const ProofNodePtr& n) {
        switch (n->kind) {
        case ProofNode::Kind::Context:
            tokens.push_back(n->context_id.str());
            return;
        case ProofNode::Kind::Naf:
            tokens.push_back(bind_naf(n->literal));
            return;
        case ProofNode::Kind::Concluded: {
            if (auto it = conc_ids.find(n.get()); it != conc_ids.end()) {
                tokens.push_back(it->second); // shared subproof: bare reference
                return;
            }
            std::string id = bind_conc(n.get());
            tokens.push_back("#");
            tokens.push_back(n->rule.str() + conc_sep() + id);
            emit_args(n->antecedents);
            return;
        }
        }
    }
};

inline bool proof_is_chain(const ProofDag& p) {
    if (!p.valid() || p.root->kind != ProofNode::Kind::Concluded) return false;
    const ProofNode* cur = p.root.get();
    while (cur) {
        const ProofNode* next = nullptr;
        for (const auto& a : cur->antecedents) {
            if (a->kind != ProofNode::Kind::Concluded) continue;
            if (next) return false; // two derived antecedents: branches
            next = a.get();
        }
        cur = next;
    }
    return true;
}

// Deepest-step-first emission of a linear chain (§-style percent strings).
inline void emit_chain_reversed(Emitter& em, const ProofDag& p) {
    std::vector<const ProofNode*> spine; // root..deepest
    const ProofNode* cur = p.root.get();
    while (cur) {
        spine.push_back(cur);
        const ProofNode* next = nullptr;
        for (const auto& a : cur->antecedents)
            if (a->kind == ProofNode::Kind::Concluded) next = a.get();
        cur = next;
    }
    for (size_t i = spine.size(); i-- > 0;) {
        const ProofNode* step = spine[i];
        std::string id = em.bind_conc(step);
        em.tokens.push_back("#");
        em.tokens.push_back(step->rule.str() + em.conc_sep() + id);
        std::vector<ProofNodePtr> extras;
        for (const auto& a : step->antecedents)
            if (a->kind != ProofNode::Kind::Concluded) extras.push_back(a);
        size_t arg_count = extras.size() + (i > 0 ? 1 : 0);
        for (size_t k = 1; k < arg_count; ++k) em.tokens.push_back("&");
        for (const auto& e : extras) em.emit_node(e);
        // the continuation (the next shallower step) is the final argument
    }
}

} // namespace detail

inline EncodedProof encode_proof(const ProofDag& p, ProofDialect dialect,
                                 const GrammarProfile& profile) {
    EncodedProof out;
    if (!p.valid()) {
        out.body = "None";
        return out;
    }
    detail::Emitter em{dialect, profile};
    if (p.root->kind == ProofNode::Kind::Context) {
        out.body = p.root->context_id.str();
        return out;
    }
    if (dialect == ProofDialect::PercentConc && detail::proof_is_chain(p)) {
        detail::emit_chain_reversed(em, p);
    } else {
        em.emit_node(p.root);
    }
    std::string body;
    for (size_t i = 0; i < em.tokens.size(); ++i) {
        if (i) body += " ";
        body += em.tokens[i];
    }
    out.body = body;
    out.bindings = std::move(em.bindings);
    return out;
}

inline std::string encode_proof_str(const ProofDag& p, ProofDialect dialect,
                                    const GrammarProfile& profile) {
    return encode_proof(p, dialect, profile).str();
}

// 1-step fragment encoding ("# sent2 sent12"): the conclusion is implicit
// (it is the answer sentence), so no conc marker is emitted.
inline std::string encode_step_proof(const OneStepInference& step,
                                     const GrammarProfile& profile) {
    std::vector<std::string> tokens = {"#", step.rule.str()};
    std::vector<std::pair<std::string, std::string>> bindings;
    int naf_counter = 0;
    for (size_t i = 1; i < step.conditions.size(); ++i) tokens.push_back("&");
    for (const auto& c : step.conditions) {
        if (c.kind == ConditionRef::Kind::Naf) {
            std::string id = "naf" + std::to_string(++naf_counter);
            bindings.push_back({id, render_fact(c.literal, profile)});
            tokens.push_back(id);
        } else {
            tokens.push_back(c.id.str());
        }
    }
    std::string body;
    for (size_t i = 0; i < tokens.size(); ++i) {
        if (i) body += " ";
        body += tokens[i];
    }
    return EncodedProof{body, std::move(bindings)}.str();
}

// ---------------------------------------------------------------------------
// Decoding

namespace detail {

struct CodecNode {
    enum class Kind { Hash, Amp, Leaf };
    Kind kind = Kind::Leaf;
    std::string rule_tag; // Hash: "rule18%conc1" | "sent2"
    std::vector<std::unique_ptr<CodecNode>> kids;
    std::string leaf;     // Leaf token
};

struct CodecParser {
    const std::vector<std::string>& toks;
    size_t pos = 0;

    std::unique_ptr<CodecNode> parse_expr() {
        if (pos >= toks.size()) throw MalformedProofError("unexpected end of proof body");
        const std::string& t = toks[pos];
        if (t == "#") {
            ++pos;
            if (pos >= toks.size())
                throw MalformedProofError("'#' must be followed by a rule marker");
            auto node = std::make_unique<CodecNode>();
            node->kind = CodecNode::Kind::Hash;
            node->rule_tag = toks[pos++];
            if (pos < toks.size()) node->kids.push_back(parse_expr());
            return node;
        }
        if (t == "&") {
            ++pos;
            auto node = std::make_unique<CodecNode>();
            node->kind = CodecNode::Kind::Amp;
            node->kids.push_back(parse_expr());
            node->kids.push_back(parse_expr());
            return node;
        }
        auto node = std::make_unique<CodecNode>();
        node->kind = CodecNode::Kind::Leaf;
        node->leaf = t;
        ++pos;
        return node;
    }
};

inline void flatten_amp(std::unique_ptr<CodecNode> n, std::vector<std::unique_ptr<CodecNode>>& out) {
    if (n->kind == CodecNode::Kind::Amp) {
        auto left = std::move(n->kids[0]);
        auto right = std::move(n->kids[1]);
        flatten_amp(std::move(left), out);
        flatten_amp(std::move(right), out);
        return;
    }
    out.push_back(std::move(n));
}

struct RuleTag {
    SentenceId rule;
    std::optional<std::string> conc_id; // "conc1" / "int3"
};

inline RuleTag parse_rule_tag(const std::string& tag, std::optional<ProofDialect>& dialect) {
    size_t pc = tag.find('%');
    size_t at = tag.find('@');
    std::string rule_part = tag, conc_part;
    if (pc != std::string::npos && at != std::string::npos)
        throw MalformedProofError("rule marker mixes dialects: " + tag);
    if (pc != std::string::npos || at != std::string::npos) {
        ProofDialect d = pc != std::string::npos ? ProofDialect::PercentConc : ProofDialect::AtInt;
        if (dialect && *dialect != d) throw MalformedProofError("mixed proof dialects");
        dialect = d;
        size_t cut = pc != std::string::npos ? pc : at;
        rule_part = tag.substr(0, cut);
        conc_part = tag.substr(cut + 1);
    }
    auto rid = try_parse_sentence_id(rule_part);
    if (!rid || rid->proof_only())
        throw MalformedProofError("bad rule id in proof: " + rule_part);
    RuleTag out{*rid, std::nullopt};
    if (!conc_part.empty()) {
        auto cid = try_parse_sentence_id(conc_part);
        bool want_conc = dialect == ProofDialect::PercentConc;
        if (!cid || (want_conc && cid->space != IdSpace::Conc) ||
            (!want_conc && cid->space != IdSpace::Int))
            throw MalformedProofError("bad intermediate id in proof: " + conc_part);
        out.conc_id = conc_part;
    }
    return out;
}

// Pulls the argument list out of a '#' node, flattening any '&' nesting.
inline std::vector<std::unique_ptr<CodecNode>> take_args(CodecNode& hash_node) {
    std::vector<std::unique_ptr<CodecNode>> args;
    if (!hash_node.kids.empty()) flatten_amp(std::move(hash_node.kids[0]), args);
    hash_node.kids.clear();
    return args;
}

struct Decoder {
    Decoder(const Theory& t, const GrammarProfile& p,
            const std::map<std::string, std::string>& b)
        : theory(t), profile(p), bindings(b) {}

    const Theory& theory;
    const GrammarProfile& profile;
    const std::map<std::string, std::string>& bindings;
    std::optional<ProofDialect> dialect;
    std::map<std::string, ProofNodePtr> conc_nodes; // by conc/int id

    Literal bound_literal(const std::string& id) const {
        auto it = bindings.find(id);
        if (it == bindings.end())
            throw UnboundIntermediateError("proof id has no 'with' binding: " + id);
        Literal lit;
        try {
            TheorySentence s = parse_sentence(it->second, profile);
            const Fact* f = std::get_if<Fact>(&s);
            if (!f) throw MalformedProofError("'with' binding is not a fact sentence: " + id);
            lit = f->literal;
        } catch (const ParseError& e) {
            throw MalformedProofError("unparseable 'with' binding for " + id + ": " + e.what());
        }
        return lit;
    }

    ProofNodePtr context_leaf(SentenceId id) const {
        const TheorySentence* s = theory.find(id);
        const Fact* f = s ? std::get_if<Fact>(s) : nullptr;
        if (!f) throw UnknownSentenceIdError("proof references unknown fact id: " + id.str());
        return ProofNode::context(id, f->literal);
    }

    SentenceId checked_rule(SentenceId id) const {
        const TheorySentence* s = theory.find(id);
        if (!s || !std::get_if<Rule>(s))
            throw UnknownSentenceIdError("proof references unknown rule id: " + id.str());
        return id;
    }

    ProofNodePtr leaf(const std::string& tok) {
        auto id = try_parse_sentence_id(tok);
        if (!id) throw MalformedProofError("unrecognized proof token: " + tok);
        if (id->space == IdSpace::Naf) return ProofNode::naf(bound_literal(tok));
        if (id->space == IdSpace::Conc || id->space == IdSpace::Int) {
            auto it = conc_nodes.find(tok);
            if (it == conc_nodes.end())
                throw UnboundIntermediateError("reference to undefined intermediate: " + tok);
            return it->second;
        }
        return context_leaf(*id);
    }

    // Standard root-first reading: '# rule%c args' concludes c from args.
    ProofNodePtr build_root_first(CodecNode& n) {
        if (n.kind == CodecNode::Kind::Leaf) return leaf(n.leaf);
        if (n.kind == CodecNode::Kind::Amp)
            throw MalformedProofError("'&' outside a rule application");
        RuleTag tag = parse_rule_tag(n.rule_tag, dialect);
        checked_rule(tag.rule);
        if (!tag.conc_id)
            throw MalformedProofError("rule application without an intermediate id: " +
                                      n.rule_tag);
        Literal concl = bound_literal(*tag.conc_id);
        auto args = take_args(n);
        if (args.empty())
            throw MalformedProofError("rule application without antecedents: " + n.rule_tag);
        std::vector<ProofNodePtr> ante;
        for (auto& a : args) ante.push_back(build_root_first(*a));
        ProofNodePtr node = ProofNode::concluded(concl, tag.rule, std::move(ante));
        if (conc_nodes.count(*tag.conc_id))
            throw MalformedProofError("intermediate id defined twice: " + *tag.conc_id);
        conc_nodes[*tag.conc_id] = node;
        return node;
    }

    // A percent body is chain-shaped when every '#' node's argument list is
    // all leaves except for at most one trailing '#' continuation.
    static bool chain_shaped(const CodecNode& n) {
        if (n.kind != CodecNode::Kind::Hash) return false;
        const CodecNode* cur = &n;
        while (cur) {
            std::vector<const CodecNode*> flat;
            auto collect = [&](auto&& self, const CodecNode& x) -> void {
                if (x.kind == CodecNode::Kind::Amp) {
                    self(self, *x.kids[0]);
                    self(self, *x.kids[1]);
                } else {
                    flat.push_back(&x);
                }
            };
            if (!cur->kids.empty()) collect(collect, *cur->kids[0]);
            const CodecNode* next = nullptr;
            for (size_t i = 0; i < flat.size(); ++i) {
                if (flat[i]->kind == CodecNode::Kind::Hash) {
                    if (i + 1 != flat.size()) return false; // '#' must be last
                    next = flat[i];
                } else if (flat[i]->kind != CodecNode::Kind::Leaf) {
                    return false;
                }
            }
            cur = next;
        }
        return true;
    }

    // Reversed (deepest-first) reading of a chain-shaped percent body: the
    // printed head is the deepest step and each step's conclusion feeds the
    // following one.
    ProofNodePtr build_reversed_chain(CodecNode& n) {
        struct Step {
            SentenceId rule;
            Literal conclusion;
            std::vector<ProofNodePtr> extras;
        };
        std::vector<Step> steps;
        CodecNode* cur = &n;
        while (cur) {
            RuleTag tag = parse_rule_tag(cur->rule_tag, dialect);
            checked_rule(tag.rule);
            if (!tag.conc_id)
                throw MalformedProofError("rule application without an intermediate id: " +
                                          cur->rule_tag);
            Step step{tag.rule, bound_literal(*tag.conc_id), {}};
            auto args = take_args(*cur);
            CodecNode* next = nullptr;
            for (auto& a : args) {
                if (a->kind == CodecNode::Kind::Hash) {
                    next = a.get();
                    // keep alive until processed
                    keepalive_.push_back(std::move(a));
                } else {
                    step.extras.push_back(leaf(a->leaf));
                }
            }
            steps.push_back(std::move(step));
            cur = next;
        }
        if (steps.empty()) throw MalformedProofError("empty proof chain");
        if (steps.front().extras.empty() && steps.size() == 1)
            throw MalformedProofError("rule application without antecedents");
        ProofNodePtr below;
        for (const Step& s : steps) {
            std::vector<ProofNodePtr> ante;
            if (below) ante.push_back(below);
            for (const auto& e : s.extras) ante.push_back(e);
            if (ante.empty())
                throw MalformedProofError("chain step without antecedents");
            below = ProofNode::concluded(s.conclusion, s.rule, std::move(ante));
        }
        return below;
    }

private:
    std::vector<std::unique_ptr<CodecNode>> keepalive_;
};

inline std::vector<std::string> split_tokens(const std::string& s) {
    std::vector<std::string> toks;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && s[i] == ' ') ++i;
        size_t start = i;
        while (i < s.size() && s[i] != ' ') ++i;
        if (i > start) toks.push_back(s.substr(start, i - start));
    }
    return toks;
}

inline std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

// Splits an encoded proof into body and with-clause bindings.
inline std::pair<std::string, std::map<std::string, std::string>>
split_with_clause(const std::string& text) {
    std::map<std::string, std::string> bindings;
    size_t pos = text.find(" ; with ");
    std::string body = pos == std::string::npos ? text : text.substr(0, pos);
    if (pos == std::string::npos) return {trim(body), bindings};
    std::string rest = text.substr(pos + 8);
    size_t start = 0;
    while (start <= rest.size()) {
        size_t next = rest.find(" ; ", start);
        std::string item =
            trim(next == std::string::npos ? rest.substr(start) : rest.substr(start, next - start));
        if (!item.empty()) {
            size_t colon = item.find(": ");
            if (colon == std::string::npos)
                throw MalformedProofError("bad 'with' binding: " + item);
            std::string id = item.substr(0, colon);
            auto sid = try_parse_sentence_id(id);
            if (!sid || !sid->proof_only())
                throw MalformedProofError("bad 'with' binding id: " + id);
            if (!bindings.emplace(id, trim(item.substr(colon + 2))).second)
                throw MalformedProofError("duplicate 'with' binding: " + id);
        }
        if (next == std::string::npos) break;
        start = next + 3;
    }
    return {trim(body), bindings};
}

} // namespace detail

// Decodes an encoded proof against a theory. Returns an invalid (None) dag
// for the "None" marker. Throws MalformedProofError (or a subtype) on any
// ill-formed input.
inline ProofDag decode_proof(const std::string& text, const Theory& t,
                             const GrammarProfile& profile) {
    auto [body, bindings] = detail::split_with_clause(text);
    if (body.empty()) throw MalformedProofError("empty proof string");
    if (body == "None") return ProofDag{nullptr};

    std::vector<std::string> toks = detail::split_tokens(body);
    detail::CodecParser parser{toks};
    std::unique_ptr<detail::CodecNode> tree = parser.parse_expr();
    if (parser.pos != toks.size())
        throw MalformedProofError("trailing tokens in proof body");

    detail::Decoder dec{t, profile, bindings};
    if (tree->kind == detail::CodecNode::Kind::Leaf) {
        auto id = try_parse_sentence_id(tree->leaf);
        if (!id || id->proof_only())
            throw MalformedProofError("bad depth-0 proof token: " + tree->leaf);
        return ProofDag{dec.context_leaf(*id)};
    }
    if (tree->kind == detail::CodecNode::Kind::Amp)
        throw MalformedProofError("proof body cannot start with '&'");

    // Peek the dialect from the first rule marker to pick the reading.
    std::optional<ProofDialect> sniff;
    detail::parse_rule_tag(tree->rule_tag, sniff);
    bool reversed = sniff == ProofDialect::PercentConc && detail::Decoder::chain_shaped(*tree);
    ProofNodePtr root = reversed ? dec.build_reversed_chain(*tree) : dec.build_root_first(*tree);
    return ProofDag{root};
}

// 1-step fragment decoding ("# sent2 sent12"), with the conclusion supplied
// externally. Enforces the fragment shape: one rule, leaf conditions only.
inline StepFragment decode_step_proof(const std::string& text, const Literal& conclusion,
                                      const Theory& t, const GrammarProfile& profile) {
    auto [body, bindings] = detail::split_with_clause(text);
    std::vector<std::string> toks = detail::split_tokens(body);
    detail::CodecParser parser{toks};
    std::unique_ptr<detail::CodecNode> tree = parser.parse_expr();
    if (parser.pos != toks.size())
        throw MalformedProofError("trailing tokens in proof body");
    if (tree->kind != detail::CodecNode::Kind::Hash)
        throw MalformedProofError("step proof must be a single rule application");

    std::optional<ProofDialect> dialect;
    detail::RuleTag tag = detail::parse_rule_tag(tree->rule_tag, dialect);
    detail::Decoder dec{t, profile, bindings};
    dec.checked_rule(tag.rule);

    StepFragment frag;
    frag.rule = tag.rule;
    frag.implication = conclusion;
    auto args = detail::take_args(*tree);
    if (args.empty()) throw MalformedProofError("step proof has no conditions");
    for (const auto& a : args) {
        if (a->kind != detail::CodecNode::Kind::Leaf)
            throw MalformedProofError("step proof must reference only context sentences");
        auto id = try_parse_sentence_id(a->leaf);
        if (!id) throw MalformedProofError("unrecognized proof token: " + a->leaf);
        if (id->space == IdSpace::Naf) {
            frag.conditions.push_back(
                {ConditionRef::Kind::Naf, {}, dec.bound_literal(a->leaf)});
        } else if (id->proof_only()) {
            throw MalformedProofError("step proof may not nest intermediates: " + a->leaf);
        } else {
            ProofNodePtr ctx = dec.context_leaf(*id);
            frag.conditions.push_back({ConditionRef::Kind::Context, *id, ctx->literal});
        }
    }
    return frag;
}

} // namespace proofwriter

#endif
