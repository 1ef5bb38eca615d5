#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "proofwriter/model.hpp"

using namespace proofwriter;

TEST_CASE("sentence ids parse and print") {
    CHECK(parse_sentence_id("sent12").str() == "sent12");
    CHECK(parse_sentence_id("triple1").space == IdSpace::Triple);
    CHECK(parse_sentence_id("conc3").proof_only());
    CHECK(!try_parse_sentence_id("sent0"));
    CHECK(!try_parse_sentence_id("sent"));
    CHECK(!try_parse_sentence_id("sentx1"));
    CHECK(!try_parse_sentence_id("rule01"));
    CHECK(SentenceId{IdSpace::Fact, 2} < SentenceId{IdSpace::Fact, 10});
}

TEST_CASE("negate_question flips polarity and is an involution") {
    Literal q = fixtures::attr("Charlie", "kind");
    Literal nq = negate_question(q);
    CHECK(nq.negated);
    CHECK(negate_question(nq) == q);

    Literal r = fixtures::rel("chase", "tiger", "lion");
    CHECK(negate_question(negate_question(r)) == r);

    Literal var{Atom::attribute(Term::variable(), "big"), false};
    CHECK_THROWS_AS(negate_question(var), ModelError);
}

TEST_CASE("signature collects exactly the mentioned vocabulary") {
    Theory t = fixtures::people_abduction();
    Signature sig = signature_of(t);
    REQUIRE(sig.entities.size() == 4);
    CHECK(sig.entities.count("Anne"));
    CHECK(sig.entities.count("Charlie"));
    CHECK(sig.entities.count("Dave"));
    CHECK(sig.entities.count("Erin"));
    std::set<std::string> attrs = {"white", "young", "round", "quiet", "rough", "blue", "smart"};
    CHECK(sig.attributes == attrs);
    CHECK(sig.verbs.empty());

    CHECK(signature_of(Theory::make({}, SemanticsMode::Cwa)).empty());
}

TEST_CASE("theory construction enforces id uniqueness") {
    std::vector<TheorySentence> ss = {
        Fact{SentenceId{IdSpace::Sent, 1}, fixtures::attr("Bob", "big")},
        Fact{SentenceId{IdSpace::Sent, 1}, fixtures::attr("Bob", "red")},
    };
    CHECK_THROWS_AS(Theory::make(std::move(ss), SemanticsMode::Cwa), ModelError);
}

TEST_CASE("CWA theories reject negative facts and conclusions") {
    std::vector<TheorySentence> neg_fact = {
        Fact{SentenceId{IdSpace::Sent, 1}, fixtures::attr("Bob", "big", false, true)}};
    CHECK_THROWS_AS(Theory::make(std::move(neg_fact), SemanticsMode::Cwa), ModelError);

    Rule r;
    r.id = SentenceId{IdSpace::Sent, 1};
    r.conditions = {Literal{Atom::attribute(Term::variable(), "big"), false}};
    r.conclusion = Literal{Atom::attribute(Term::variable(), "red"), true};
    CHECK_THROWS_AS(Theory::make({r}, SemanticsMode::Cwa), ModelError);
    CHECK_NOTHROW(Theory::make({r}, SemanticsMode::Owa));
}

TEST_CASE("CWA rejects a free variable only in a negated condition") {
    Rule r;
    r.id = SentenceId{IdSpace::Sent, 1};
    r.conditions = {Literal{Atom::attribute(Term::variable(), "blue"), true}};
    r.conclusion = fixtures::attr("Bob", "happy");
    CHECK_THROWS_AS(Theory::make({r}, SemanticsMode::Cwa), ModelError);
    // grounded negated condition is fine
    Rule g;
    g.id = SentenceId{IdSpace::Sent, 1};
    g.conditions = {fixtures::attr("Bob", "blue", false, true)};
    g.conclusion = fixtures::attr("Bob", "happy");
    CHECK_NOTHROW(Theory::make({g}, SemanticsMode::Cwa));
}

TEST_CASE("no accepted CWA theory carries negative facts or conclusions") {
    Theory t = fixtures::charlie();
    for (const auto& f : t.facts()) CHECK(!f.literal.negated);
    for (const auto& r : t.rules()) CHECK(!r.conclusion.negated);
    CHECK(lint_theory(t).empty());
}

TEST_CASE("lint reports duplicate literals under distinct ids") {
    std::vector<TheorySentence> ss = {
        Fact{SentenceId{IdSpace::Sent, 1}, fixtures::attr("Bob", "big")},
        Fact{SentenceId{IdSpace::Sent, 2}, fixtures::attr("Bob", "big")},
    };
    Theory t = Theory::make(std::move(ss), SemanticsMode::Cwa);
    auto findings = lint_theory(t);
    REQUIRE(findings.size() == 1);
    CHECK(findings[0].find("duplicate-literal") == 0);
}

TEST_CASE("next_id tops existing indices") {
    Theory t = fixtures::animals27();
    CHECK(t.next_id().str() == "sent28");
    Theory c = fixtures::charlie();
    CHECK(c.next_id().str() == "fact19");
    CHECK(Theory::make({}, SemanticsMode::Cwa).next_id().str() == "sent1");
}
