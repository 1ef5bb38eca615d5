#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "proofwriter/t5.hpp"

using namespace proofwriter;

TEST_CASE("qa inputs import with task dispatch") {
    std::string s = std::string("$answer$ ; $proof$ ; $question$ = The lion is not nice? ; "
                                "$context$ = ") +
                    fixtures::kAnimalContext20;
    T5Input in = import_t5_input(s);
    CHECK(in.task == TaskKind::Qa);
    CHECK(in.question == "The lion is not nice?");
    CHECK(in.context == fixtures::kAnimalContext20);
    CHECK(format_t5_input(in) == s);
}

TEST_CASE("iterative and enumeration inputs dispatch on the fixed question") {
    std::string iter = std::string("$answer$ ; $proof$ ; $question$ = ") + kIterativeQuestion +
                       " ; $context$ = " + fixtures::kAnimalContext27;
    CHECK(import_t5_input(iter).task == TaskKind::IterativeStep);

    std::string en = std::string("$answer$ ; $proof$ ; $question$ = ") + kEnumerationQuestion +
                     " ; $context$ = " + fixtures::kAnimalContext20;
    CHECK(import_t5_input(en).task == TaskKind::Enumeration);
}

TEST_CASE("abduction inputs have no proof slot") {
    std::string s = std::string("$answer$ ; $question$ = Dave is rough. ; $context$ = ") +
                    fixtures::kPeopleAbductionContext;
    T5Input in = import_t5_input(s);
    CHECK(in.task == TaskKind::Abduction);
    CHECK(in.question == "Dave is rough.");
    CHECK(format_t5_input(in) == s);
}

TEST_CASE("garbage strings raise FormatError") {
    CHECK_THROWS_AS(import_t5_input("hello world"), FormatError);
    CHECK_THROWS_AS(import_t5_input("$answer$ ; $proof$ ; $question$ = Q"), FormatError);
    CHECK_THROWS_AS(import_t5_output("True"), FormatError);
}

TEST_CASE("outputs round-trip with and without proofs") {
    T5Output with_proof{"True", "# sent2 sent12"};
    std::string s = format_t5_output(with_proof);
    CHECK(s == "$answer$ = True ; $proof$ = # sent2 sent12");
    T5Output back = import_t5_output(s);
    CHECK(back.answer == "True");
    CHECK(back.proof == "# sent2 sent12");

    T5Output bare{"Dave is young. , Dave is smart.", std::nullopt};
    CHECK(import_t5_output(format_t5_output(bare)).answer == bare.answer);
    CHECK(!import_t5_output(format_t5_output(bare)).proof.has_value());
}
