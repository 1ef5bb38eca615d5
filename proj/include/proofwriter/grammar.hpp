#ifndef PROOFWRITER_GRAMMAR_HPP
#define PROOFWRITER_GRAMMAR_HPP

#include <cctype>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "proofwriter/model.hpp"

// Bidirectional mapping between the logical model and the templated English
// of the datasets. The grammar is closed; docs/grammar.md is the contract.

namespace proofwriter {

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& msg, size_t offset, std::vector<std::string> expected = {})
        : std::runtime_error(format(msg, offset, expected)),
          offset_(offset),
          expected_(std::move(expected)) {}

    size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    static std::string format(const std::string& msg, size_t offset,
                              const std::vector<std::string>& expected) {
        std::ostringstream os;
        os << msg << " (at byte " << offset << ")";
        if (!expected.empty()) {
            os << ", expected one of:";
            for (const auto& e : expected) os << " " << e;
        }
        return os.str();
    }
    size_t offset_;
    std::vector<std::string> expected_;
};

class DuplicateIdError : public ParseError {
public:
    using ParseError::ParseError;
};

class UnrenderableLiteral : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Profiles

struct GrammarProfile {
    enum class World { People, Animals };
    World world = World::People;
    std::vector<std::string> entity_pool;    // surface names ("Bob" / "tiger")
    std::vector<std::string> attribute_pool;
    std::vector<std::string> verb_pool;      // base forms

    std::string plural_noun() const { return world == World::People ? "people" : "things"; }
    std::string var_intro() const { return world == World::People ? "someone" : "something"; }
    std::string var_back() const { return world == World::People ? "they" : "it"; }
    bool entity_article() const { return world == World::Animals; }
};

inline const GrammarProfile& people_profile() {
    static const GrammarProfile p{
        GrammarProfile::World::People,
        {"Anne", "Bob", "Charlie", "Dave", "Erin", "Fiona", "Gary", "Harry"},
        {"big", "blue", "cold", "furry", "green", "kind", "nice", "quiet", "red", "rough",
         "round", "smart", "white", "young"},
        {"likes", "needs"},
    };
    return p;
}

inline const GrammarProfile& animals_profile() {
    static const GrammarProfile p{
        GrammarProfile::World::Animals,
        {"bald eagle", "bear", "cat", "cow", "dog", "lion", "mouse", "rabbit", "squirrel",
         "tiger"},
        {"big", "blue", "cold", "green", "kind", "nice", "red", "rough", "round", "young"},
        {"chases", "eats", "likes", "needs", "sees", "visits"},
    };
    return p;
}

// Third-person table; anything unlisted falls back to base+"s".
inline const std::map<std::string, std::string>& verb_conjugation() {
    static const std::map<std::string, std::string> table = {
        {"chase", "chases"}, {"eat", "eats"},   {"like", "likes"},
        {"need", "needs"},   {"see", "sees"},   {"visit", "visits"},
    };
    return table;
}

inline std::string third_person(const std::string& base) {
    auto it = verb_conjugation().find(base);
    return it != verb_conjugation().end() ? it->second : base + "s";
}

inline std::optional<std::string> base_of_third_person(const std::string& v3s) {
    for (const auto& [base, third] : verb_conjugation())
        if (third == v3s) return base;
    if (v3s.size() > 1 && v3s.back() == 's') return v3s.substr(0, v3s.size() - 1);
    return std::nullopt;
}

namespace detail {

inline std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

inline std::string ucfirst(std::string s) {
    if (!s.empty()) s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
    return s;
}

inline bool all_alpha(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != '-') return false;
    return true;
}

inline bool capitalized(std::string_view s) {
    return !s.empty() && std::isupper(static_cast<unsigned char>(s[0]));
}

// The token set a verb-position word is matched against. All profile verbs
// are stored as third-person forms in the pools.
inline std::set<std::string> known_third_person_verbs(const GrammarProfile& profile) {
    std::set<std::string> out;
    for (const auto& [base, third] : verb_conjugation()) out.insert(third);
    for (const auto& v : people_profile().verb_pool) out.insert(v);
    for (const auto& v : animals_profile().verb_pool) out.insert(v);
    for (const auto& v : profile.verb_pool) out.insert(v);
    return out;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline void check_token(const std::string& tok, const char* what) {
    if (tok.empty()) throw UnrenderableLiteral(std::string("empty ") + what);
    for (char c : tok)
        if (!std::isalpha(static_cast<unsigned char>(c)) && c != ' ' && c != '-')
            throw UnrenderableLiteral(std::string("unrenderable ") + what + ": " + tok);
}

inline std::string render_np(const Term& t, bool sentence_start) {
    check_token(t.name, "entity");
    if (!t.definite_article) return t.name;
    return (sentence_start ? "The " : "the ") + t.name;
}

// One clause ("X is not red" / "they do not like the dog"). var_seen tracks
// whether the rule variable has been introduced yet.
inline std::string render_clause(const Literal& l, const GrammarProfile& profile, bool* var_seen,
                                 bool sentence_start) {
    const Atom& a = l.atom;
    std::string subj;
    bool plural = false;
    if (a.subject.is_variable()) {
        if (var_seen && !*var_seen) {
            subj = profile.var_intro(); // "someone" takes singular agreement
            *var_seen = true;
        } else {
            subj = profile.var_back();
            plural = profile.world == GrammarProfile::World::People; // "they are"
        }
        if (sentence_start) subj = ucfirst(subj);
    } else {
        subj = render_np(a.subject, sentence_start);
    }
    if (a.kind == Atom::Kind::Attribute) {
        check_token(a.predicate, "attribute");
        return subj + (plural ? " are " : " is ") + (l.negated ? "not " : "") + a.predicate;
    }
    check_token(a.predicate, "verb");
    if (a.object.is_variable())
        throw UnrenderableLiteral("relation object is a variable");
    std::string obj = render_np(a.object, false);
    if (l.negated) return subj + (plural ? " do not " : " does not ") + a.predicate + " " + obj;
    return subj + " " + (plural ? a.predicate : third_person(a.predicate)) + " " + obj;
}

} // namespace detail

inline std::string render_fact(const Literal& l, const GrammarProfile& profile) {
    if (!l.ground()) throw UnrenderableLiteral("fact literal is not ground");
    return detail::render_clause(l, profile, nullptr, true) + ".";
}

inline std::string render_rule(const Rule& r, const GrammarProfile& profile) {
    auto positive_var_attr = [](const Literal& l) {
        return !l.negated && l.atom.kind == Atom::Kind::Attribute && l.atom.subject.is_variable();
    };
    auto var_attr = [](const Literal& l) {
        return l.atom.kind == Atom::Kind::Attribute && l.atom.subject.is_variable();
    };
    RuleSurface surface = r.surface;
    bool attr_shape = var_attr(r.conclusion);
    for (const auto& c : r.conditions) attr_shape = attr_shape && positive_var_attr(c);
    if (!attr_shape) surface = RuleSurface::IfThen;

    std::string not_part = r.conclusion.negated ? "not " : "";
    switch (surface) {
    case RuleSurface::AllAre:
        if (r.conditions.size() == 1)
            return "All " + r.conditions[0].atom.predicate + " " + profile.plural_noun() +
                   " are " + not_part + r.conclusion.atom.predicate + ".";
        surface = RuleSurface::AdjListAre;
        [[fallthrough]];
    case RuleSurface::AdjListAre: {
        if (r.conditions.size() < 2) {
            surface = RuleSurface::BareAre;
        } else {
            std::string out;
            for (size_t i = 0; i < r.conditions.size(); ++i) {
                std::string a = r.conditions[i].atom.predicate;
                if (i == 0) a = detail::ucfirst(a);
                out += a;
                out += (i + 1 < r.conditions.size()) ? ", " : " ";
            }
            return out + profile.plural_noun() + " are " + not_part +
                   r.conclusion.atom.predicate + ".";
        }
        [[fallthrough]];
    }
    case RuleSurface::BareAre:
        if (r.conditions.size() == 1)
            return detail::ucfirst(r.conditions[0].atom.predicate) + " " + profile.plural_noun() +
                   " are " + not_part + r.conclusion.atom.predicate + ".";
        [[fallthrough]];
    case RuleSurface::IfThen:
        break;
    }
    bool var_seen = false;
    std::string out = "If ";
    for (size_t i = 0; i < r.conditions.size(); ++i) {
        const Literal& c = r.conditions[i];
        if (i) out += " and ";
        // Copula elision: consecutive attribute conditions on the same
        // subject share one "is" ("If someone is rough and young then ...").
        bool elide = i > 0 && c.atom.kind == Atom::Kind::Attribute &&
                     r.conditions[i - 1].atom.kind == Atom::Kind::Attribute &&
                     c.atom.subject == r.conditions[i - 1].atom.subject;
        if (elide) {
            out += (c.negated ? "not " : "") + c.atom.predicate;
        } else {
            out += detail::render_clause(c, profile, &var_seen, false);
        }
    }
    out += " then ";
    out += detail::render_clause(r.conclusion, profile, &var_seen, false);
    return out + ".";
}

inline std::string render_sentence(const TheorySentence& s, const GrammarProfile& profile) {
    if (const Fact* f = std::get_if<Fact>(&s)) return render_fact(f->literal, profile);
    return render_rule(std::get<Rule>(s), profile);
}

// Question surface: the fact sentence with '.' swapped for '?'.
inline std::string render_question(const Literal& q, const GrammarProfile& profile) {
    std::string s = render_fact(q, profile);
    s.back() = '?';
    return s;
}

inline GrammarProfile infer_profile(const Theory& t) {
    Signature sig = signature_of(t);
    for (const auto& [name, article] : sig.entities)
        if (!article) return people_profile();
    return sig.entities.empty() ? people_profile() : animals_profile();
}

inline std::string render_context(const Theory& t, const GrammarProfile& profile) {
    std::string out;
    for (const auto& s : t.sentences()) {
        if (!out.empty()) out += " ";
        out += sentence_id(s).str() + ": " + render_sentence(s, profile);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Parsing

namespace detail {

struct Token {
    std::string text;
    size_t offset;
};

inline std::vector<Token> tokenize(std::string_view s) {
    std::vector<Token> toks;
    size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        size_t start = i;
        while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
        if (i > start) toks.push_back({std::string(s.substr(start, i - start)), start});
    }
    return toks;
}

class SentenceParser {
public:
    SentenceParser(std::vector<Token> toks, const GrammarProfile& profile, size_t base_offset)
        : toks_(std::move(toks)),
          profile_(profile),
          base_(base_offset),
          verbs_(known_third_person_verbs(profile)) {}

    // Entry point. The final token must carry the terminal '.'.
    TheorySentence parse() {
        if (toks_.empty()) fail("empty sentence", {"sentence"});
        Token& last = toks_.back();
        if (last.text.size() < 2 || last.text.back() != '.')
            fail_at(last.offset + last.text.size(), "sentence must end with '.'", {"."});
        last.text.pop_back();
        TheorySentence out = parse_body();
        if (pos_ != toks_.size()) fail("trailing tokens after sentence", {"end of sentence"});
        return out;
    }

private:
    TheorySentence parse_body() {
        std::string head = lower(peek());
        if (head == "if") return parse_if_then();
        if (head == "all") return parse_all_are();
        if (is_adjlist_rule()) return parse_adjlist_are();
        Literal lit = parse_clause(false);
        if (!lit.ground()) fail("facts cannot contain variables", {"entity"});
        return Fact{SentenceId{IdSpace::Sent, 0}, lit};
    }

    TheorySentence parse_if_then() {
        eat(); // "if"
        Rule r;
        r.id = SentenceId{IdSpace::Sent, 0};
        r.surface = RuleSurface::IfThen;
        r.conditions.push_back(parse_clause(true));
        while (pos_ < toks_.size() && lower(peek()) == "and") {
            eat();
            if (elided_attribute_follows(r.conditions.back())) {
                bool negated = false;
                if (lower(peek()) == "not") {
                    eat();
                    negated = true;
                }
                std::string attr = expect_word("attribute");
                r.conditions.push_back(Literal{
                    Atom::attribute(r.conditions.back().atom.subject, lower(attr)), negated});
            } else {
                r.conditions.push_back(parse_clause(true));
            }
        }
        if (pos_ >= toks_.size() || lower(peek()) != "then")
            fail("expected 'then'", {"and", "then"});
        eat();
        r.conclusion = parse_clause(true);
        return r;
    }

    // "is rough and young": an attribute continuing the previous condition's
    // subject without restating the copula. Recognized when the upcoming word
    // is neither a subject starter nor a verb, and the previous condition was
    // an attribute clause.
    bool elided_attribute_follows(const Literal& prev) const {
        if (prev.atom.kind != Atom::Kind::Attribute) return false;
        if (pos_ >= toks_.size()) return false;
        std::string w = lower(peek());
        if (w == "not") return true;
        if (w == "the" || w == "someone" || w == "something" || w == "they" || w == "it")
            return false;
        if (capitalized(peek())) return false;
        if (verbs_.count(w)) return false;
        if (reserved_word(w)) return false;
        // attributes are clause-final single words
        if (pos_ + 1 < toks_.size()) {
            std::string nxt = lower(toks_[pos_ + 1].text);
            return nxt == "and" || nxt == "then";
        }
        return false;
    }

    TheorySentence parse_all_are() {
        eat(); // "all"
        Rule r;
        r.id = SentenceId{IdSpace::Sent, 0};
        r.surface = RuleSurface::AllAre;
        std::string attr = expect_word("attribute");
        r.conditions.push_back(Literal{Atom::attribute(Term::variable(), lower(attr)), false});
        expect_plural_noun();
        expect_keyword("are");
        r.conclusion = parse_are_conclusion();
        return r;
    }

    // "Rough, white people are smart." / "Big things are young."
    bool is_adjlist_rule() const {
        for (size_t i = 1; i + 1 < toks_.size(); ++i) {
            std::string w = lower(toks_[i].text);
            if ((w == "people" || w == "things") && lower(toks_[i + 1].text) == "are") {
                for (size_t j = 0; j < i; ++j) {
                    std::string adj = toks_[j].text;
                    if (!adj.empty() && adj.back() == ',') adj.pop_back();
                    if (!all_alpha(adj) || reserved_word(lower(adj))) return false;
                }
                return true;
            }
        }
        return false;
    }

    TheorySentence parse_adjlist_are() {
        Rule r;
        r.id = SentenceId{IdSpace::Sent, 0};
        bool saw_comma = false;
        while (true) {
            std::string w = lower(peek());
            if (w == "people" || w == "things") break;
            std::string adj = eat().text;
            if (!adj.empty() && adj.back() == ',') {
                adj.pop_back();
                saw_comma = true;
            }
            adj = lower(adj);
            if (!all_alpha(adj)) fail("expected attribute", {"attribute"});
            r.conditions.push_back(Literal{Atom::attribute(Term::variable(), adj), false});
        }
        r.surface = saw_comma ? RuleSurface::AdjListAre : RuleSurface::BareAre;
        expect_plural_noun();
        expect_keyword("are");
        r.conclusion = parse_are_conclusion();
        return r;
    }

    Literal parse_are_conclusion() {
        bool negated = false;
        if (pos_ < toks_.size() && lower(peek()) == "not") {
            eat();
            negated = true;
        }
        std::string attr = expect_word("attribute");
        return Literal{Atom::attribute(Term::variable(), lower(attr)), negated};
    }

    // "<subject> is [not] <attr>" | "<subject> [does not] <verb> <object>"
    Literal parse_clause(bool allow_variable) {
        Term subj = parse_term(allow_variable);
        bool plural_subject = subj.is_variable() && last_pronoun_plural_;
        if (pos_ >= toks_.size()) fail("unexpected end of clause", {"is", "does", "verb"});
        std::string w = lower(peek());
        if (w == (plural_subject ? "are" : "is") || w == "is" || w == "are") {
            eat();
            bool negated = false;
            if (pos_ < toks_.size() && lower(peek()) == "not") {
                eat();
                negated = true;
            }
            std::string attr = expect_word("attribute");
            return Literal{Atom::attribute(subj, lower(attr)), negated};
        }
        if (w == "does" || w == "do") {
            eat();
            expect_keyword("not");
            std::string base = lower(expect_word("verb"));
            Term obj = parse_term(false);
            return Literal{Atom::relation(base, subj, obj), true};
        }
        if (verbs_.count(w) || (plural_subject && verbs_.count(third_person(w)))) {
            eat();
            std::string base;
            if (plural_subject && verbs_.count(third_person(w))) {
                base = w;
            } else {
                auto b = base_of_third_person(w);
                if (!b) fail("unknown verb form: " + w, {"verb"});
                base = *b;
            }
            Term obj = parse_term(false);
            return Literal{Atom::relation(base, subj, obj), false};
        }
        fail("expected predicate after subject", verb_expectations());
        return {};
    }

    Term parse_term(bool allow_variable) {
        if (pos_ >= toks_.size()) fail("expected a noun phrase", {"entity"});
        std::string w = lower(peek());
        if (allow_variable &&
            (w == "someone" || w == "something" || w == "they" || w == "it")) {
            last_pronoun_plural_ = (w == "they");
            eat();
            return Term::variable();
        }
        if (w == "the") {
            eat();
            std::string name;
            while (pos_ < toks_.size()) {
                std::string nw = lower(peek());
                if (nw == "is" || nw == "are" || nw == "does" || nw == "do" || nw == "and" ||
                    nw == "then" || verbs_.count(nw))
                    break;
                if (!all_alpha(peek())) break;
                if (!name.empty()) name += " ";
                name += nw;
                eat();
            }
            if (name.empty()) fail("expected a noun after 'the'", {"noun"});
            return Term::entity(name, true);
        }
        if (capitalized(peek()) && all_alpha(peek())) {
            std::string name = eat().text;
            return Term::entity(name, false);
        }
        fail("expected a noun phrase", {"the <noun>", "<Name>", "someone", "something"});
        return {};
    }

    // -- low-level helpers

    const std::string& peek() const { return toks_[pos_].text; }
    Token eat() { return toks_[pos_++]; }

    static bool reserved_word(const std::string& lw) {
        static const std::set<std::string> kReserved = {
            "the", "a",  "an",   "if", "all",     "then",      "and",  "not",
            "is",  "are", "does", "do", "someone", "something", "they", "it"};
        return kReserved.count(lw) > 0;
    }

    std::string expect_word(const char* what) {
        if (pos_ >= toks_.size()) fail(std::string("expected ") + what, {what});
        if (reserved_word(lower(peek()))) fail(std::string("expected ") + what, {what});
        std::string w = eat().text;
        if (!all_alpha(w)) fail(std::string("expected ") + what, {what});
        return w;
    }

    void expect_keyword(const std::string& kw) {
        if (pos_ >= toks_.size() || lower(peek()) != kw)
            fail("expected '" + kw + "'", {kw});
        eat();
    }

    void expect_plural_noun() {
        if (pos_ >= toks_.size()) fail("expected 'people' or 'things'", {"people", "things"});
        std::string w = lower(peek());
        if (w != "people" && w != "things") fail("expected 'people' or 'things'",
                                                 {"people", "things"});
        eat();
    }

    std::vector<std::string> verb_expectations() const {
        std::vector<std::string> e = {"is", "are", "does", "do"};
        for (const auto& v : verbs_) e.push_back(v);
        return e;
    }

    [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
        size_t off = pos_ < toks_.size() ? toks_[pos_].offset : end_offset();
        fail_at(off, msg, std::move(expected));
    }
    [[noreturn]] void fail_at(size_t off, const std::string& msg,
                              std::vector<std::string> expected) const {
        throw ParseError(msg, base_ + off, std::move(expected));
    }
    size_t end_offset() const {
        return toks_.empty() ? 0 : toks_.back().offset + toks_.back().text.size();
    }

    std::vector<Token> toks_;
    const GrammarProfile& profile_;
    size_t base_;
    std::set<std::string> verbs_;
    size_t pos_ = 0;
    bool last_pronoun_plural_ = false;
};

} // namespace detail

inline TheorySentence parse_sentence(std::string_view text,
                                     const GrammarProfile& profile = people_profile(),
                                     size_t base_offset = 0) {
    return detail::SentenceParser(detail::tokenize(text), profile, base_offset).parse();
}

// Accepts the question surface form (terminal '?' or '.').
inline Literal parse_question(std::string_view text,
                              const GrammarProfile& profile = people_profile()) {
    std::string s(text);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.pop_back();
    if (!s.empty() && s.back() == '?') s.back() = '.';
    TheorySentence parsed = parse_sentence(s, profile);
    const Fact* f = std::get_if<Fact>(&parsed);
    if (!f) throw ParseError("question is not a fact sentence", 0, {"fact"});
    return f->literal;
}

// "sent1: The tiger chases the lion. sent2: ..." -> Theory (mode supplied).
inline Theory parse_context(std::string_view ctx, SemanticsMode mode,
                            const GrammarProfile& profile = people_profile()) {
    std::vector<detail::Token> toks = detail::tokenize(ctx);
    std::vector<TheorySentence> sentences;
    std::set<SentenceId> seen;

    size_t i = 0;
    while (i < toks.size()) {
        const std::string& head = toks[i].text;
        if (head.size() < 2 || head.back() != ':')
            throw ParseError("expected a sentence id like 'sent1:'", toks[i].offset, {"<id>:"});
        auto id = try_parse_sentence_id(std::string_view(head).substr(0, head.size() - 1));
        if (!id || id->proof_only())
            throw ParseError("unrecognized sentence id: " + head, toks[i].offset, {"<id>:"});
        if (!seen.insert(*id).second)
            throw DuplicateIdError("duplicate sentence id: " + id->str(), toks[i].offset);
        size_t j = i + 1;
        std::vector<detail::Token> body;
        while (j < toks.size()) {
            const std::string& t = toks[j].text;
            if (t.size() >= 2 && t.back() == ':' &&
                try_parse_sentence_id(std::string_view(t).substr(0, t.size() - 1)))
                break;
            body.push_back(toks[j]);
            ++j;
        }
        if (body.empty())
            throw ParseError("sentence body is empty for " + id->str(), toks[i].offset,
                             {"sentence"});
        TheorySentence s = detail::SentenceParser(std::move(body), profile, 0).parse();
        std::visit([&](auto& x) { x.id = *id; }, s);
        sentences.push_back(std::move(s));
        i = j;
    }
    return Theory::make(std::move(sentences), mode);
}

} // namespace proofwriter

#endif
