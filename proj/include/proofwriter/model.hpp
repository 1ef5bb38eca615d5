#ifndef PROOFWRITER_MODEL_HPP
#define PROOFWRITER_MODEL_HPP

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "proofwriter/ids.hpp"

namespace proofwriter {

class ModelError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A term is either a named individual or the rule variable. Entities carry
// their noun-phrase style: "Bob" renders bare, "tiger" renders as "the tiger".
struct Term {
    enum class Kind { Constant, Variable };
    Kind kind = Kind::Constant;
    std::string name;             // empty for the variable
    bool definite_article = false;

    static Term variable() { return Term{Kind::Variable, "", false}; }
    static Term entity(std::string n, bool article) {
        return Term{Kind::Constant, std::move(n), article};
    }
    bool is_variable() const { return kind == Kind::Variable; }

    friend auto operator<=>(const Term&, const Term&) = default;
};

// Unary attribute atom ("X is kind") or binary relation atom ("X chases Y").
// At most one distinct variable may appear (the shared rule variable).
struct Atom {
    enum class Kind { Attribute, Relation };
    Kind kind = Kind::Attribute;
    Term subject;
    std::string predicate; // attribute name, or verb base form ("chase")
    Term object;           // relations only

    static Atom attribute(Term subj, std::string attr) {
        return Atom{Kind::Attribute, std::move(subj), std::move(attr), Term{}};
    }
    static Atom relation(std::string verb, Term subj, Term obj) {
        return Atom{Kind::Relation, std::move(subj), std::move(verb), std::move(obj)};
    }

    bool ground() const {
        return !subject.is_variable() && (kind == Kind::Attribute || !object.is_variable());
    }
    bool has_variable() const { return !ground(); }

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

struct Literal {
    Atom atom;
    bool negated = false;

    bool ground() const { return atom.ground(); }
    Literal negate() const { return Literal{atom, !negated}; }

    friend auto operator<=>(const Literal&, const Literal&) = default;
};

// Polarity involution on questions: add or remove the "not".
inline Literal negate_question(const Literal& q) {
    if (!q.ground()) throw ModelError("negate_question: literal is not ground");
    return q.negate();
}

inline Literal substitute(const Literal& l, const Term& binding) {
    Literal out = l;
    if (out.atom.subject.is_variable()) out.atom.subject = binding;
    if (out.atom.kind == Atom::Kind::Relation && out.atom.object.is_variable())
        out.atom.object = binding;
    return out;
}

struct Fact {
    SentenceId id;
    Literal literal;
};

// Surface template a rule was written in; parsing records it so rendering
// round-trips exactly.
enum class RuleSurface {
    IfThen,     // "If something is big then it visits the dog."
    AllAre,     // "All smart people are rough."
    AdjListAre, // "Rough, white people are smart."
    BareAre,    // "Big things are young."
};

struct Rule {
    SentenceId id;
    std::vector<Literal> conditions; // length >= 1
    Literal conclusion;
    RuleSurface surface = RuleSurface::IfThen;
};

enum class SemanticsMode { Cwa, Owa };

inline std::string to_string(SemanticsMode m) { return m == SemanticsMode::Cwa ? "CWA" : "OWA"; }

enum class TruthValue { True, False, Unknown };

inline std::string to_string(TruthValue t) {
    switch (t) {
    case TruthValue::True: return "True";
    case TruthValue::False: return "False";
    case TruthValue::Unknown: return "Unknown";
    }
    return "";
}

struct Signature {
    std::map<std::string, bool> entities; // name -> takes "the" article
    std::set<std::string> attributes;
    std::set<std::string> verbs; // base forms

    bool empty() const { return entities.empty() && attributes.empty() && verbs.empty(); }
};

using TheorySentence = std::variant<Fact, Rule>;

inline SentenceId sentence_id(const TheorySentence& s) {
    return std::visit([](const auto& x) { return x.id; }, s);
}

// An identified set of facts and rules plus the semantics they are read
// under. Construction validates id uniqueness and the CWA polarity rules
// (no negated facts, no negated conclusions).
class Theory {
public:
    Theory() = default;

    static Theory make(std::vector<TheorySentence> sentences, SemanticsMode mode) {
        Theory t;
        t.mode_ = mode;
        std::set<SentenceId> seen;
        for (auto& s : sentences) {
            SentenceId id = sentence_id(s);
            if (id.proof_only())
                throw ModelError("theory sentence uses a proof-only id: " + id.str());
            if (!seen.insert(id).second)
                throw ModelError("duplicate sentence id: " + id.str());
            if (mode == SemanticsMode::Cwa) {
                if (const Fact* f = std::get_if<Fact>(&s); f && f->literal.negated)
                    throw ModelError("CWA theory contains a negated fact: " + id.str());
                if (const Rule* r = std::get_if<Rule>(&s); r && r->conclusion.negated)
                    throw ModelError("CWA rule has a negated conclusion: " + id.str());
            }
            if (const Fact* f = std::get_if<Fact>(&s); f && !f->literal.ground())
                throw ModelError("fact is not ground: " + id.str());
            if (const Rule* r = std::get_if<Rule>(&s)) {
                if (r->conditions.empty())
                    throw ModelError("rule has no conditions: " + id.str());
                bool concl_has_var = r->conclusion.atom.has_variable();
                bool var_in_positive = false, var_in_negated_only = false;
                bool any_var_cond = false;
                for (const auto& c : r->conditions) {
                    if (!c.atom.has_variable()) continue;
                    any_var_cond = true;
                    if (!c.negated) var_in_positive = true;
                }
                var_in_negated_only = any_var_cond && !var_in_positive;
                if (concl_has_var && !var_in_positive)
                    throw ModelError("rule conclusion variable unbound by any positive condition: " +
                                     id.str());
                if (mode == SemanticsMode::Cwa && var_in_negated_only)
                    throw ModelError("CWA rule has a free variable only in a negated condition: " +
                                     id.str());
            }
            t.sentences_.push_back(std::move(s));
        }
        return t;
    }

    SemanticsMode mode() const { return mode_; }
    const std::vector<TheorySentence>& sentences() const { return sentences_; }

    std::vector<Fact> facts() const {
        std::vector<Fact> out;
        for (const auto& s : sentences_)
            if (const Fact* f = std::get_if<Fact>(&s)) out.push_back(*f);
        return out;
    }
    std::vector<Rule> rules() const {
        std::vector<Rule> out;
        for (const auto& s : sentences_)
            if (const Rule* r = std::get_if<Rule>(&s)) out.push_back(*r);
        return out;
    }

    const TheorySentence* find(SentenceId id) const {
        for (const auto& s : sentences_)
            if (sentence_id(s) == id) return &s;
        return nullptr;
    }

    // Next free id for appending implications during the iterative loop
    // ("sent28: The cow is rough."). Uses the sent namespace when present,
    // otherwise fact; the index tops every existing index so mixed
    // namespaces cannot collide.
    SentenceId next_id() const {
        bool has_sent = false;
        int max_index = 0;
        for (const auto& s : sentences_) {
            SentenceId id = sentence_id(s);
            has_sent = has_sent || id.space == IdSpace::Sent;
            max_index = std::max(max_index, id.index);
        }
        return SentenceId{has_sent || sentences_.empty() ? IdSpace::Sent : IdSpace::Fact,
                          max_index + 1};
    }

    Theory with_fact(const Fact& f) const {
        Theory t = *this;
        if (t.find(f.id)) throw ModelError("duplicate sentence id: " + f.id.str());
        t.sentences_.push_back(f);
        return t;
    }

private:
    SemanticsMode mode_ = SemanticsMode::Cwa;
    std::vector<TheorySentence> sentences_;
};

inline void collect_signature(const Literal& l, Signature& sig) {
    const Atom& a = l.atom;
    if (!a.subject.is_variable()) sig.entities[a.subject.name] = a.subject.definite_article;
    if (a.kind == Atom::Kind::Attribute) {
        sig.attributes.insert(a.predicate);
    } else {
        sig.verbs.insert(a.predicate);
        if (!a.object.is_variable()) sig.entities[a.object.name] = a.object.definite_article;
    }
}

// Exact sets of entities, attributes and verbs mentioned anywhere in t.
inline Signature signature_of(const Theory& t) {
    Signature sig;
    for (const auto& s : t.sentences()) {
        if (const Fact* f = std::get_if<Fact>(&s)) {
            collect_signature(f->literal, sig);
        } else {
            const Rule& r = std::get<Rule>(s);
            for (const auto& c : r.conditions) collect_signature(c, sig);
            collect_signature(r.conclusion, sig);
        }
    }
    return sig;
}

// Appendix A.2-style lint: reports repairs the generated datasets enforce.
// Returns human-readable findings; empty means clean.
inline std::vector<std::string> lint_theory(const Theory& t) {
    std::vector<std::string> findings;
    std::set<Literal> fact_literals;
    for (const auto& f : t.facts()) {
        if (!fact_literals.insert(f.literal).second)
            findings.push_back("duplicate-literal: " + f.id.str());
        if (t.mode() == SemanticsMode::Cwa && f.literal.negated)
            findings.push_back("negated-fact-under-cwa: " + f.id.str());
    }
    for (const auto& r : t.rules()) {
        if (t.mode() == SemanticsMode::Cwa && r.conclusion.negated)
            findings.push_back("negated-conclusion-under-cwa: " + r.id.str());
        bool var_pos = false, var_neg = false;
        for (const auto& c : r.conditions) {
            if (!c.atom.has_variable()) continue;
            (c.negated ? var_neg : var_pos) = true;
        }
        if (var_neg && !var_pos)
            findings.push_back("variable-only-in-negated-condition: " + r.id.str());
    }
    return findings;
}

} // namespace proofwriter

#endif
