#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "proofwriter/codec.hpp"
#include "proofwriter/proof.hpp"

using namespace proofwriter;

TEST_CASE("the charlie proof encodes to the percent-dialect string verbatim") {
    Theory t = fixtures::charlie();
    ProofDag p = all_proofs(t, fixtures::attr("Charlie", "kind")).proofs[0];
    CHECK(encode_proof_str(p, ProofDialect::PercentConc, people_profile()) ==
          fixtures::kCharlieProofPercent);
}

TEST_CASE("the animal proof encodes to the at-dialect string verbatim") {
    Theory t = fixtures::animals20();
    ProofDag p = all_proofs(t, fixtures::attr("lion", "nice", true, true)).proofs[0];
    CHECK(encode_proof_str(p, ProofDialect::AtInt, animals_profile()) ==
          fixtures::kAnimalProofAtDialect);
}

TEST_CASE("depth-0 proofs are the bare fact id") {
    Theory t = fixtures::charlie();
    ProofDag p = all_proofs(t, fixtures::attr("Charlie", "smart")).proofs[0];
    CHECK(encode_proof_str(p, ProofDialect::PercentConc, people_profile()) == "fact5");
    CHECK(encode_proof_str(p, ProofDialect::AtInt, people_profile()) == "fact5");
    ProofDag back = decode_proof("fact5", t, people_profile());
    CHECK(canonicalize(back) == canonicalize(p));
}

TEST_CASE("None round-trips as the no-proof marker") {
    Theory t = fixtures::charlie();
    ProofDag none = decode_proof("None", t, people_profile());
    CHECK(!none.valid());
    CHECK(encode_proof_str(none, ProofDialect::PercentConc, people_profile()) == "None");
}

TEST_CASE("both golden strings decode back to their DAGs") {
    Theory charlie = fixtures::charlie();
    ProofDag p = all_proofs(charlie, fixtures::attr("Charlie", "kind")).proofs[0];
    ProofDag decoded = decode_proof(fixtures::kCharlieProofPercent, charlie, people_profile());
    CHECK(canonicalize(decoded) == canonicalize(p));

    Theory animals = fixtures::animals20();
    ProofDag q = all_proofs(animals, fixtures::attr("lion", "nice", true, true)).proofs[0];
    ProofDag qd = decode_proof(fixtures::kAnimalProofAtDialect, animals, animals_profile());
    CHECK(canonicalize(qd) == canonicalize(q));
}

TEST_CASE("codec round-trips hold for every proof of both fixtures, both dialects") {
    struct Case {
        Theory theory;
        GrammarProfile profile;
    };
    std::vector<Case> cases = {{fixtures::charlie(), people_profile()},
                               {fixtures::animals20(), animals_profile()}};
    for (const auto& c : cases) {
        Closure cl = closure(c.theory);
        auto gis = ground_instances(c.theory);
        for (const auto& [lit, imp] : cl.implications) {
            for (const auto& p : all_proofs_with_closure(c.theory, lit, cl, gis).proofs) {
                for (ProofDialect d : {ProofDialect::PercentConc, ProofDialect::AtInt}) {
                    std::string enc = encode_proof_str(p, d, c.profile);
                    ProofDag back = decode_proof(enc, c.theory, c.profile);
                    CHECK(canonicalize(back) == canonicalize(p));
                }
            }
        }
    }
}

TEST_CASE("branching proofs use root-first emission in both dialects") {
    Theory t = parse_context(
        "sent1: Bob is big. sent2: Bob is cold. "
        "sent3: If Bob is big then Bob is quiet. sent4: If Bob is cold then Bob is round. "
        "sent5: If Bob is quiet and Bob is round then Bob is kind.",
        SemanticsMode::Cwa, people_profile());
    ProofDag p = all_proofs(t, fixtures::attr("Bob", "kind")).proofs[0];
    std::string enc = encode_proof_str(p, ProofDialect::PercentConc, people_profile());
    CHECK(enc ==
          "# sent5%conc1 & # sent3%conc2 sent1 # sent4%conc3 sent2 ; with conc1: Bob is kind. ; "
          "conc2: Bob is quiet. ; conc3: Bob is round.");
    ProofDag back = decode_proof(enc, t, people_profile());
    CHECK(canonicalize(back) == canonicalize(p));
}

TEST_CASE("left-nested conjunctions encode rules with three conditions") {
    Theory t = parse_context(
        "sent1: Bob is big. sent2: Bob is cold. sent3: Bob is round. "
        "sent4: If Bob is big and Bob is cold and Bob is round then Bob is kind.",
        SemanticsMode::Cwa, people_profile());
    ProofDag p = all_proofs(t, fixtures::attr("Bob", "kind")).proofs[0];
    std::string enc = encode_proof_str(p, ProofDialect::AtInt, people_profile());
    CHECK(enc == "# sent4@int1 & & sent1 sent2 sent3 ; with int1: Bob is kind.");
    // the decoder accepts any nesting of the same conjunction
    ProofDag alt = decode_proof("# sent4@int1 & sent1 & sent2 sent3 ; with int1: Bob is kind.",
                                t, people_profile());
    CHECK(canonicalize(alt) == canonicalize(p));
}

TEST_CASE("NAF leaves are emitted as naf ids with bindings") {
    Theory t = parse_context("sent1: Bob is kind. sent2: If Bob is not red then Bob is blue.",
                             SemanticsMode::Cwa, people_profile());
    ProofDag p = all_proofs(t, fixtures::attr("Bob", "blue")).proofs[0];
    std::string enc = encode_proof_str(p, ProofDialect::PercentConc, people_profile());
    CHECK(enc == "# sent2%conc1 naf1 ; with conc1: Bob is blue. ; naf1: Bob is not red.");
    ProofDag back = decode_proof(enc, t, people_profile());
    CHECK(canonicalize(back) == canonicalize(p));
    CHECK(verify_proof(back, t).fully_verified());
}

TEST_CASE("chains whose top rule has only the spine condition still encode") {
    Theory t = parse_context(
        "sent1: Bob is big. sent2: If Bob is big then Bob is quiet. "
        "sent3: If Bob is quiet then Bob is kind.",
        SemanticsMode::Cwa, people_profile());
    ProofDag p = all_proofs(t, fixtures::attr("Bob", "kind")).proofs[0];
    std::string enc = encode_proof_str(p, ProofDialect::PercentConc, people_profile());
    CHECK(enc ==
          "# sent2%conc1 & sent1 # sent3%conc2 ; with conc1: Bob is quiet. ; conc2: Bob is "
          "kind.");
    ProofDag back = decode_proof(enc, t, people_profile());
    CHECK(canonicalize(back) == canonicalize(p));
    // the same proof in the at dialect is root-first
    CHECK(encode_proof_str(p, ProofDialect::AtInt, people_profile()) ==
          "# sent3@int1 # sent2@int2 sent1 ; with int1: Bob is kind. ; int2: Bob is quiet.");
}

TEST_CASE("step proofs encode without a conclusion marker") {
    Theory t = fixtures::animals27();
    auto steps = one_step_inferences(t);
    bool found = false;
    for (const auto& s : steps) {
        if (!(s.literal == fixtures::attr("cow", "rough", true) && s.rule.str() == "sent2"))
            continue;
        CHECK(encode_step_proof(s, animals_profile()) == "# sent2 sent12");
        found = true;
    }
    REQUIRE(found);

    StepFragment frag = decode_step_proof("# sent2 sent12", fixtures::attr("cow", "rough", true),
                                          t, animals_profile());
    CHECK(frag.rule.str() == "sent2");
    REQUIRE(frag.conditions.size() == 1);
    CHECK(frag.conditions[0].id.str() == "sent12");
}

TEST_CASE("malformed proof strings raise typed errors") {
    Theory t = fixtures::charlie();
    auto profile = people_profile();
    CHECK_THROWS_AS(decode_proof("", t, profile), MalformedProofError);
    CHECK_THROWS_AS(decode_proof("#", t, profile), MalformedProofError);
    CHECK_THROWS_AS(decode_proof("& fact5 fact16", t, profile), MalformedProofError);
    CHECK_THROWS_AS(decode_proof("# rule18%conc1 fact99 ; with conc1: Charlie is quiet.", t,
                                 profile),
                    UnknownSentenceIdError);
    CHECK_THROWS_AS(decode_proof("# rule18%conc1 fact5", t, profile),
                    UnboundIntermediateError);
    CHECK_THROWS_AS(decode_proof("# rule18%conc1 conc2 ; with conc1: Charlie is quiet. ; "
                                 "conc2: Charlie is young.",
                                 t, profile),
                    UnboundIntermediateError);
    CHECK_THROWS_AS(decode_proof("# rule18%conc1 @ fact5 ; with conc1: Charlie is quiet.", t,
                                 profile),
                    MalformedProofError);
    CHECK_THROWS_AS(
        decode_proof("# rule18%conc1 # rule12@int1 fact5 ; with conc1: Charlie is quiet. ; "
                     "int1: Charlie is young.",
                     t, profile),
        MalformedProofError); // mixed dialects
    CHECK_THROWS_AS(decode_proof("# fact5%conc1 fact16 ; with conc1: Charlie is quiet.", t,
                                 profile),
                    MalformedProofError); // a fact id in rule position
}

TEST_CASE("shared subproofs emit one definition and bare references") {
    // young is used both directly and through quiet
    Theory t = parse_context(
        "sent1: Bob is big. "
        "sent2: If Bob is big then Bob is young. "
        "sent3: If Bob is young then Bob is quiet. "
        "sent4: If Bob is young and Bob is quiet then Bob is kind.",
        SemanticsMode::Cwa, people_profile());
    ProofDag p = all_proofs(t, fixtures::attr("Bob", "kind")).proofs[0];
    std::string enc = encode_proof_str(p, ProofDialect::AtInt, people_profile());
    CHECK(enc ==
          "# sent4@int1 & # sent2@int2 sent1 # sent3@int3 int2 ; with int1: Bob is kind. ; "
          "int2: Bob is young. ; int3: Bob is quiet.");
    ProofDag back = decode_proof(enc, t, people_profile());
    CHECK(canonicalize(back) == canonicalize(p));
}
