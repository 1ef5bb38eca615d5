#include <catch2/catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "proofwriter/datagen.hpp"
#include "proofwriter/metrics.hpp"

using namespace proofwriter;

namespace {

std::vector<Prediction> gold_as_predictions(const std::vector<DatasetExample>& golds,
                                            size_t proof_index = 0) {
    std::vector<Prediction> preds;
    for (const auto& g : golds) {
        Prediction p;
        p.id = g.id;
        p.answer = g.answer;
        p.proof = g.proofs.empty() ? "None" : g.proofs[proof_index % g.proofs.size()];
        preds.push_back(p);
    }
    return preds;
}

std::vector<DatasetExample> sample_gold(SemanticsMode mode, uint64_t seed) {
    GenConfig cfg;
    cfg.mode = mode;
    cfg.target_depth = 2;
    cfg.entities = {2, 3};
    cfg.facts = {3, 6};
    cfg.rules = {4, 7};
    cfg.seed = seed;
    cfg.questions_per_theory = 8;
    if (mode == SemanticsMode::Owa) cfg.negation_prob = 0.25;
    return gen_batch(cfg, 4, TaskKind::Qa).examples;
}

} // namespace

TEST_CASE("gold scored against itself is perfect at every depth") {
    for (SemanticsMode mode : {SemanticsMode::Cwa, SemanticsMode::Owa}) {
        auto golds = sample_gold(mode, 17);
        REQUIRE(!golds.empty());
        for (bool skeleton : {false, true}) {
            ScoreReport rep = score_qa(golds, gold_as_predictions(golds), skeleton);
            for (const auto& row : rep.rows) {
                INFO("depth row " << row.depth);
                CHECK(row.answer_acc == 1.0);
                CHECK(row.proof_acc == 1.0);
                CHECK(row.verified_acc == 1.0);
            }
        }
    }
}

TEST_CASE("per-depth counts reproduce the dataset histogram") {
    auto golds = sample_gold(SemanticsMode::Cwa, 23);
    std::map<std::string, int> hist;
    for (const auto& g : golds) hist[g.depth ? std::to_string(*g.depth) : "N/A"] += 1;
    ScoreReport rep = score_qa(golds, gold_as_predictions(golds));
    int total = 0;
    for (const auto& row : rep.rows) {
        if (row.depth == "All") {
            CHECK(row.count == static_cast<int>(golds.size()));
            continue;
        }
        CHECK(hist[row.depth] == row.count);
        total += row.count;
    }
    CHECK(total == static_cast<int>(golds.size()));
}

namespace {

// gold example for one literal, by direct construction
DatasetExample direct_gold(const Theory& t, const Literal& q, const GrammarProfile& profile,
                           const std::string& id) {
    DatasetExample e;
    e.id = id;
    for (const auto& s : t.sentences())
        e.theory.push_back({sentence_id(s).str(), render_sentence(s, profile)});
    Answer a = answer(t, q);
    e.question = render_question(q, profile);
    e.answer = to_string(a.truth);
    e.depth = a.depth;
    if (a.proved)
        for (const auto& p : all_proofs(t, *a.proved).proofs)
            e.proofs.push_back(encode_proof_str(p, ProofDialect::PercentConc, profile));
    e.mode = t.mode();
    return e;
}

} // namespace

TEST_CASE("wrong intermediates score 0 in full mode but 1 in skeleton mode") {
    Theory t = fixtures::charlie();
    std::optional<DatasetExample> kind =
        direct_gold(t, fixtures::attr("Charlie", "kind"), people_profile(), "ch-kind");
    REQUIRE(kind->answer == "True");
    REQUIRE(kind->depth == 3);

    // corrupt one intermediate sentence, keeping the structure
    Prediction p{kind->id, kind->answer, kind->proofs[0]};
    size_t at = p.proof.find("conc2: Charlie is young.");
    REQUIRE(at != std::string::npos);
    p.proof.replace(at, 24, "conc2: Charlie is green.");

    ScoreReport full = score_qa({*kind}, {p}, false);
    CHECK(full.all().answer_acc == 1.0);
    CHECK(full.all().proof_acc == 0.0);
    ScoreReport skel = score_qa({*kind}, {p}, true);
    CHECK(skel.all().proof_acc == 1.0);
    // the corrupted step no longer verifies
    CHECK(skel.all().verified_acc == 0.0);
}

TEST_CASE("a None proof on a provable gold scores 0") {
    auto golds = sample_gold(SemanticsMode::Cwa, 31);
    std::optional<DatasetExample> provable;
    for (auto& g : golds)
        if (!g.proofs.empty()) provable = g;
    REQUIRE(provable.has_value());
    Prediction p{provable->id, provable->answer, "None"};
    ScoreReport rep = score_qa({*provable}, {p});
    CHECK(rep.all().answer_acc == 1.0);
    CHECK(rep.all().proof_acc == 0.0);
}

TEST_CASE("unparseable prediction proofs score 0 without aborting") {
    auto golds = sample_gold(SemanticsMode::Cwa, 37);
    REQUIRE(golds.size() >= 2);
    auto preds = gold_as_predictions(golds);
    preds[0].proof = "# % & garbage ((";
    ScoreReport rep = score_qa(golds, preds);
    CHECK(rep.all().proof_acc < 1.0);
    CHECK(rep.all().answer_acc == 1.0);
}

TEST_CASE("alignment errors are loud") {
    auto golds = sample_gold(SemanticsMode::Cwa, 41);
    auto preds = gold_as_predictions(golds);
    preds.pop_back();
    std::vector<Prediction> unaligned;
    for (size_t i = 0; i + 1 < preds.size(); ++i) unaligned.push_back(preds[i]);
    CHECK_THROWS_AS(score_qa(golds, unaligned), AlignmentError);
    auto renamed = gold_as_predictions(golds);
    renamed[0].id = "no-such-id";
    CHECK_THROWS_AS(score_qa(golds, renamed), AlignmentError);
}

TEST_CASE("match-any holds across multiple gold proofs") {
    Theory t = parse_context(
        "sent1: Bob is big. sent2: Bob is cold. "
        "sent3: If Bob is big then Bob is kind. sent4: If Bob is cold then Bob is kind.",
        SemanticsMode::Cwa, people_profile());
    std::optional<DatasetExample> kind =
        direct_gold(t, fixtures::attr("Bob", "kind"), people_profile(), "m-kind");
    REQUIRE(kind->answer == "True");
    REQUIRE(kind->proofs.size() == 2);
    for (size_t i = 0; i < 2; ++i) {
        Prediction p{kind->id, "True", kind->proofs[i]};
        CHECK(score_qa({*kind}, {p}).all().proof_acc == 1.0);
    }
}

TEST_CASE("enumeration scoring is order-insensitive with exact F1 arithmetic") {
    DatasetExample gold;
    gold.id = "e1";
    gold.task = TaskKind::Enumeration;
    std::string joined;
    for (int i = 0; i < 9; ++i) {
        if (i) joined += " ";
        joined += fixtures::kAnimalImplications[i];
    }
    gold.answer = joined;

    // same set, different order
    std::string reversed;
    for (int i = 8; i >= 0; --i) {
        if (!reversed.empty()) reversed += " ";
        reversed += fixtures::kAnimalImplications[i];
    }
    ScoreReport same = score_enumeration({gold}, {{"e1", reversed, ""}});
    CHECK(same.f1 == 1.0);
    CHECK(same.set_accuracy == 1.0);

    // 8 of 9, nothing spurious: F1 = 16/17
    std::string partial;
    for (int i = 0; i < 8; ++i) {
        if (i) partial += " ";
        partial += fixtures::kAnimalImplications[i];
    }
    ScoreReport eight = score_enumeration({gold}, {{"e1", partial, ""}});
    CHECK(std::abs(eight.f1 - 16.0 / 17.0) < 1e-9);
    CHECK(eight.set_accuracy == 0.0);

    DatasetExample empty_gold;
    empty_gold.id = "e2";
    empty_gold.answer = "None";
    ScoreReport both_empty = score_enumeration({empty_gold}, {{"e2", "None", ""}});
    CHECK(both_empty.f1 == 1.0);
    CHECK(both_empty.set_accuracy == 1.0);
}

TEST_CASE("abduction scoring: F1, perfect match, and recall by depth") {
    DatasetExample gold;
    gold.id = "a1";
    gold.task = TaskKind::Abduction;
    gold.answer = "Dave is smart. , Dave is young.";
    gold.fact_depths = {1, 2};

    ScoreReport exact = score_abduction({gold}, {{"a1", "Dave is young. , Dave is smart.", ""}});
    CHECK(exact.f1 == 1.0);
    CHECK(exact.set_accuracy == 1.0);

    ScoreReport half = score_abduction({gold}, {{"a1", "Dave is young.", ""}});
    CHECK(std::abs(half.f1 - 2.0 / 3.0) < 1e-9);
    CHECK(half.set_accuracy == 0.0);
    CHECK(half.recall_by_depth.at("1").second == 0.0); // smart (depth 1) missed
    CHECK(half.recall_by_depth.at("2").second == 1.0); // young (depth 2) found

    DatasetExample none_gold;
    none_gold.id = "a2";
    none_gold.task = TaskKind::Abduction;
    none_gold.answer = "None";
    ScoreReport none = score_abduction({none_gold}, {{"a2", "None", ""}});
    CHECK(none.f1 == 1.0);
    CHECK(none.set_accuracy == 1.0);
    CHECK(none.recall_by_depth.at("N/A").second == 1.0);
}

TEST_CASE("verification audit counts corrupted proofs as unverified") {
    auto golds = sample_gold(SemanticsMode::Cwa, 53);
    auto preds = gold_as_predictions(golds);
    ScoreReport clean = run_verification_audit(golds, preds);
    CHECK(clean.all().verified_acc == 1.0);

    // corrupt ~10% of proofs by breaking one bound intermediate sentence
    int corrupted = 0;
    for (size_t i = 0; i < preds.size() && corrupted < (int)(preds.size() + 9) / 10; ++i) {
        if (preds[i].proof == "None") continue;
        size_t colon = preds[i].proof.find(": ");
        size_t dot = colon == std::string::npos ? colon : preds[i].proof.find('.', colon);
        if (colon == std::string::npos || dot == std::string::npos) continue;
        ++corrupted;
        preds[i].proof.replace(colon + 2, dot - colon - 2, "Zz is zz");
    }
    if (corrupted > 0) {
        ScoreReport rep = run_verification_audit(golds, preds);
        double expected = 1.0 - static_cast<double>(corrupted) / preds.size();
        CHECK(std::abs(rep.all().verified_acc - expected) < 1e-9);
    }
}

TEST_CASE("raw t5 output lines align by order") {
    auto golds = sample_gold(SemanticsMode::Cwa, 61);
    std::vector<Prediction> preds;
    for (const auto& g : golds) {
        T5Output out{g.answer, g.proofs.empty() ? "None" : g.proofs[0]};
        T5Output back = import_t5_output(format_t5_output(out));
        preds.push_back({"", back.answer, back.proof.value_or("")});
    }
    ScoreReport rep = score_qa(golds, preds);
    CHECK(rep.all().answer_acc == 1.0);
    CHECK(rep.all().proof_acc == 1.0);
}
