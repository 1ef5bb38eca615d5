#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "fixtures.hpp"
#include "proofwriter/abduction.hpp"
#include "proofwriter/proof.hpp"

using namespace proofwriter;

TEST_CASE("candidate space covers both polarities minus stated facts") {
    Theory t = fixtures::people_abduction();
    auto cands = candidate_space(t);
    // 4 entities x 7 attributes x 2 polarities - 4 stated facts
    CHECK(cands.size() == 52);
    std::set<Literal> set(cands.begin(), cands.end());
    CHECK(!set.count(fixtures::attr("Dave", "round"))); // stated
    CHECK(set.count(fixtures::attr("Dave", "round", false, true)));
    CHECK(set.count(fixtures::attr("Dave", "rough")));

    auto positives = candidate_space(t, {.positive_only = true});
    CHECK(positives.size() == 24); // 4x7 - 4

    CHECK(candidate_space(Theory::make({}, SemanticsMode::Owa)).empty());
}

TEST_CASE("candidate space counts relations as ordered pairs with self-pairs") {
    Theory t = parse_context(
        "sent1: The dog is big. sent2: If something chases the dog then the cat is big.",
        SemanticsMode::Owa, animals_profile());
    // 2 entities, 1 attribute, 1 verb: 2*1*2 + 2*2*2 - 1 stated = 11
    CHECK(candidate_space(t).size() == 11);
}

TEST_CASE("abduction finds exactly the alternative missing facts") {
    Theory t = fixtures::people_abduction();
    Literal q = parse_question("Dave is rough.", people_profile());
    AbductionAnswer a = abduce_single_fact(t, q);
    std::set<std::string> got;
    for (const auto& m : a.missing_facts) got.insert(render_fact(m, people_profile()));
    CHECK(got == std::set<std::string>{"Dave is young.", "Dave is smart."});
    CHECK(!a.none());
    CHECK(a.render(people_profile()) == "Dave is smart. , Dave is young.");
}

TEST_CASE("abduced facts really prove the hypothesis and carry proofs") {
    Theory t = fixtures::people_abduction();
    Literal q = parse_question("Dave is rough.", people_profile());
    for (const auto& m : abduce_single_fact(t, q).missing_facts) {
        CHECK(!(m == q));
        Theory t2 = t.with_fact(Fact{t.next_id(), m});
        CHECK(answer(t2, q).truth == TruthValue::True);
        CHECK(!all_proofs(t2, q).proofs.empty());
    }
}

TEST_CASE("no derivation path means None") {
    Theory t = parse_context(
        "sent1: Bob is big. sent2: If someone is young then they are smart.",
        SemanticsMode::Owa, people_profile());
    AbductionAnswer a = abduce_single_fact(t, fixtures::attr("Bob", "rough"));
    CHECK(a.none());
    CHECK(a.render(people_profile()) == "None");
}

TEST_CASE("provable or refuted hypotheses are rejected") {
    Theory t = fixtures::people_abduction();
    CHECK_THROWS_AS(abduce_single_fact(t, fixtures::attr("Dave", "round")), NotUnprovableError);
    Theory cwa = fixtures::charlie();
    CHECK_THROWS_AS(abduce_single_fact(cwa, fixtures::attr("Charlie", "blue")), InferenceError);
}

TEST_CASE("candidates that contradict the theory are skipped, not fatal") {
    // "Bob is not big." would prove the goal but contradicts sent1.
    Theory t = parse_context(
        "sent1: Bob is big. sent2: If Bob is not big then Bob is rough. "
        "sent3: If Bob is quiet then Bob is rough.",
        SemanticsMode::Owa, people_profile());
    AbductionAnswer a = abduce_single_fact(t, fixtures::attr("Bob", "rough"));
    std::set<std::string> got;
    for (const auto& m : a.missing_facts) got.insert(render_fact(m, people_profile()));
    CHECK(got == std::set<std::string>{"Bob is quiet."});
}

TEST_CASE("negative missing facts are found when rules need them") {
    Theory t = parse_context(
        "sent1: Bob is big. sent2: If Bob is not red then Bob is rough.",
        SemanticsMode::Owa, people_profile());
    AbductionAnswer a = abduce_single_fact(t, fixtures::attr("Bob", "rough"));
    std::set<std::string> got;
    for (const auto& m : a.missing_facts) got.insert(render_fact(m, people_profile()));
    CHECK(got == std::set<std::string>{"Bob is not red."});

    AbductionAnswer restricted =
        abduce_single_fact(t, fixtures::attr("Bob", "rough"), {.positive_only = true});
    CHECK(restricted.none());
}
