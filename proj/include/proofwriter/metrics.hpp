#ifndef PROOFWRITER_METRICS_HPP
#define PROOFWRITER_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proofwriter/codec.hpp"
#include "proofwriter/dataset.hpp"
#include "proofwriter/proof.hpp"

// Scoring of predictions against gold for the three tasks, with the depth
// breakdown the result tables use. Predictions that fail to decode score 0;
// the run never aborts on a bad prediction.

namespace proofwriter {

class AlignmentError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Prediction {
    std::string id; // empty when aligned by order
    std::string answer;
    std::string proof; // optional
};

namespace detail {

inline std::string normalize_sentence(const std::string& s) {
    std::string out;
    bool in_space = false;
    for (char c : s) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
            in_space = !out.empty();
            continue;
        }
        if (in_space) out += ' ';
        in_space = false;
        out += c;
    }
    if (!out.empty() && out.back() != '.' && out.back() != '?') out += '.';
    return out;
}

// "The dog is big. The tiger is big." -> normalized sentence set
inline std::multiset<std::string> split_sentences(const std::string& s) {
    std::multiset<std::string> out;
    std::string cur;
    for (char c : s) {
        cur += c;
        if (c == '.') {
            std::string n = normalize_sentence(cur);
            if (n != ".") out.insert(n);
            cur.clear();
        }
    }
    std::string tail = normalize_sentence(cur);
    if (!tail.empty() && tail != ".") out.insert(tail);
    return out;
}

inline std::multiset<std::string> split_fact_list(const std::string& s) {
    std::multiset<std::string> out;
    if (detail::normalize_sentence(s) == "None.") return out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t next = s.find(" , ", start);
        std::string item = next == std::string::npos ? s.substr(start) : s.substr(start, next - start);
        std::string n = normalize_sentence(item);
        if (!n.empty() && n != ".") out.insert(n);
        if (next == std::string::npos) break;
        start = next + 3;
    }
    return out;
}

struct SetScores {
    double precision = 1, recall = 1, f1 = 1;
    bool exact = true;
};

// Ordering is ignored and duplicates collapse before comparison.
inline SetScores set_scores(const std::multiset<std::string>& pred,
                            const std::multiset<std::string>& gold) {
    SetScores s;
    if (pred.empty() && gold.empty()) return s; // convention: F1 = 1
    std::set<std::string> ps(pred.begin(), pred.end()), gs(gold.begin(), gold.end());
    size_t tp = 0;
    for (const auto& p : ps) tp += gs.count(p);
    s.precision = ps.empty() ? 0 : static_cast<double>(tp) / ps.size();
    s.recall = gs.empty() ? 0 : static_cast<double>(tp) / gs.size();
    s.f1 = (s.precision + s.recall) == 0 ? 0 : 2 * s.precision * s.recall / (s.precision + s.recall);
    s.exact = ps == gs;
    return s;
}

inline std::string depth_label(const std::optional<int>& d) {
    return d ? std::to_string(*d) : "N/A";
}

inline int depth_rank(const std::string& label) {
    return label == "N/A" ? -1 : std::stoi(label);
}

} // namespace detail

struct DepthRow {
    std::string depth = "All";
    int count = 0;
    double answer_acc = 0;
    double proof_acc = 0;
    double verified_acc = 0;
};

struct ScoreReport {
    std::string task = "qa";
    std::vector<DepthRow> rows; // per-depth then "All"

    // enumeration: micro-averaged F1 + exact-set accuracy
    // abduction: mean per-example F1 + perfect-match accuracy
    double f1 = 0;
    double set_accuracy = 0;
    std::map<std::string, std::pair<int, double>> recall_by_depth; // abduction

    const DepthRow& all() const { return rows.back(); }

    std::string text() const {
        std::ostringstream os;
        os << "task: " << task << "\n";
        if (task == "qa" || task == "verify") {
            os << std::left << std::setw(6) << "depth" << std::right << std::setw(8) << "count"
               << std::setw(12) << "answer" << std::setw(12) << "proof" << std::setw(12)
               << "verified" << "\n";
            for (const auto& r : rows) {
                os << std::left << std::setw(6) << r.depth << std::right << std::setw(8) << r.count
                   << std::fixed << std::setprecision(1) << std::setw(11) << r.answer_acc * 100
                   << "%" << std::setw(11) << r.proof_acc * 100 << "%" << std::setw(11)
                   << r.verified_acc * 100 << "%\n";
            }
        } else {
            os << std::fixed << std::setprecision(2) << "F1: " << f1 * 100
               << "  accuracy: " << set_accuracy * 100 << "  (n=" << all().count << ")\n";
            if (!recall_by_depth.empty()) {
                os << "recall by gold proof depth:\n";
                for (const auto& [d, cr] : recall_by_depth)
                    os << "  " << std::left << std::setw(5) << d << std::right << cr.first
                       << " gold, recall " << std::fixed << std::setprecision(2)
                       << cr.second * 100 << "%\n";
            }
        }
        return os.str();
    }

    nlohmann::ordered_json json() const {
        nlohmann::ordered_json j;
        j["task"] = task;
        nlohmann::ordered_json rws = nlohmann::ordered_json::array();
        for (const auto& r : rows)
            rws.push_back({{"depth", r.depth},
                           {"count", r.count},
                           {"answer_acc", r.answer_acc},
                           {"proof_acc", r.proof_acc},
                           {"verified_acc", r.verified_acc}});
        j["rows"] = rws;
        if (task == "enumeration" || task == "abduction") {
            j["f1"] = f1;
            j["accuracy"] = set_accuracy;
        }
        if (!recall_by_depth.empty()) {
            nlohmann::ordered_json rb;
            for (const auto& [d, cr] : recall_by_depth)
                rb[d] = {{"gold", cr.first}, {"recall", cr.second}};
            j["recall_by_depth"] = rb;
        }
        return j;
    }
};

namespace detail {

struct Bucket {
    int count = 0;
    double answer = 0, proof = 0, verified = 0;
};

inline std::vector<DepthRow> bucket_rows(std::map<std::string, Bucket>& buckets) {
    std::vector<std::string> labels;
    for (const auto& [k, v] : buckets) labels.push_back(k);
    std::sort(labels.begin(), labels.end(), [](const std::string& a, const std::string& b) {
        return depth_rank(a) < depth_rank(b);
    });
    std::vector<DepthRow> rows;
    Bucket all;
    for (const auto& l : labels) {
        const Bucket& b = buckets[l];
        rows.push_back({l, b.count, b.count ? b.answer / b.count : 0,
                        b.count ? b.proof / b.count : 0, b.count ? b.verified / b.count : 0});
        all.count += b.count;
        all.answer += b.answer;
        all.proof += b.proof;
        all.verified += b.verified;
    }
    rows.push_back({"All", all.count, all.count ? all.answer / all.count : 0,
                    all.count ? all.proof / all.count : 0,
                    all.count ? all.verified / all.count : 0});
    return rows;
}

} // namespace detail

// Aligns predictions with golds: by id when ids are present, else by order.
inline std::vector<Prediction> align_predictions(const std::vector<DatasetExample>& golds,
                                                 std::vector<Prediction> preds) {
    bool by_id = !preds.empty() && !preds.front().id.empty();
    if (!by_id) {
        if (preds.size() != golds.size())
            throw AlignmentError("prediction count " + std::to_string(preds.size()) +
                                 " does not match gold count " + std::to_string(golds.size()));
        for (size_t i = 0; i < preds.size(); ++i) preds[i].id = golds[i].id;
        return preds;
    }
    std::map<std::string, Prediction> by;
    for (auto& p : preds) {
        if (!by.emplace(p.id, p).second) throw AlignmentError("duplicate prediction id: " + p.id);
    }
    std::vector<Prediction> aligned;
    for (const auto& g : golds) {
        auto it = by.find(g.id);
        if (it == by.end()) throw AlignmentError("missing prediction for id: " + g.id);
        aligned.push_back(it->second);
    }
    return aligned;
}

// Full-proof QA scoring. skeleton=true drops intermediate conclusion texts
// before comparison (for systems that do not generate them). A prediction
// proof scores 1 iff it decodes and canonically equals any gold proof.
inline ScoreReport score_qa(const std::vector<DatasetExample>& golds,
                            std::vector<Prediction> preds, bool skeleton = false,
                            const GrammarProfile* profile_hint = nullptr) {
    std::vector<Prediction> aligned = align_predictions(golds, std::move(preds));
    std::map<std::string, detail::Bucket> buckets;
    for (size_t i = 0; i < golds.size(); ++i) {
        const DatasetExample& g = golds[i];
        const Prediction& p = aligned[i];
        detail::Bucket& b = buckets[detail::depth_label(g.depth)];
        b.count += 1;
        b.answer += detail::normalize_sentence(p.answer) == detail::normalize_sentence(g.answer);

        GrammarProfile profile = profile_hint ? *profile_hint : people_profile();
        Theory theory;
        bool have_theory = true;
        try {
            theory = g.parse_theory(profile);
            if (!profile_hint) {
                profile = infer_profile(theory);
                theory = g.parse_theory(profile);
            }
        } catch (const std::exception&) {
            have_theory = false;
        }

        bool gold_has_proof = !g.proofs.empty() && g.proofs[0] != "None";
        std::string pred_proof = detail::normalize_sentence(p.proof);
        bool pred_none = p.proof.empty() || pred_proof == "None.";
        if (!have_theory) continue;
        if (!gold_has_proof) {
            double ok = pred_none ? 1.0 : 0.0;
            b.proof += ok;
            b.verified += ok;
            continue;
        }
        if (pred_none) continue; // proof 0, verified 0
        try {
            ProofDag dag = decode_proof(p.proof, theory, profile);
            if (!dag.valid()) continue;
            std::string canon = canonicalize(dag, skeleton);
            bool match = false;
            for (const auto& gp : g.proofs) {
                ProofDag gd = decode_proof(gp, theory, profile);
                match = match || canonicalize(gd, skeleton) == canon;
            }
            b.proof += match;
            b.verified += verify_proof(dag, theory).fully_verified();
        } catch (const ProofError&) {
            // undecodable prediction proofs score 0
        } catch (const ParseError&) {
        }
    }
    ScoreReport rep;
    rep.task = "qa";
    rep.rows = detail::bucket_rows(buckets);
    return rep;
}

// Implication-set scoring: micro-averaged F1 over normalized sentences plus
// exact-set accuracy (bar ordering).
inline ScoreReport score_enumeration(const std::vector<DatasetExample>& golds,
                                     std::vector<Prediction> preds) {
    std::vector<Prediction> aligned = align_predictions(golds, std::move(preds));
    size_t tp = 0, fp = 0, fn = 0;
    int exact = 0;
    for (size_t i = 0; i < golds.size(); ++i) {
        auto gold = golds[i].answer == "None" ? std::multiset<std::string>{}
                                              : detail::split_sentences(golds[i].answer);
        auto pred = aligned[i].answer == "None" ? std::multiset<std::string>{}
                                                : detail::split_sentences(aligned[i].answer);
        std::set<std::string> gs(gold.begin(), gold.end()), ps(pred.begin(), pred.end());
        for (const auto& s : ps) (gs.count(s) ? tp : fp) += 1;
        for (const auto& s : gs) fn += !ps.count(s);
        exact += gs == ps;
    }
    ScoreReport rep;
    rep.task = "enumeration";
    double prec = tp + fp ? static_cast<double>(tp) / (tp + fp) : 1.0;
    double rec = tp + fn ? static_cast<double>(tp) / (tp + fn) : 1.0;
    rep.f1 = prec + rec > 0 ? 2 * prec * rec / (prec + rec) : 0.0;
    rep.set_accuracy = golds.empty() ? 1.0 : static_cast<double>(exact) / golds.size();
    DepthRow all{"All", static_cast<int>(golds.size()), rep.set_accuracy, 0, 0};
    rep.rows = {all};
    return rep;
}

// Missing-fact scoring: per-example F1, perfect-match accuracy, and recall
// bucketed by the gold facts' completed-proof depths.
inline ScoreReport score_abduction(const std::vector<DatasetExample>& golds,
                                   std::vector<Prediction> preds) {
    std::vector<Prediction> aligned = align_predictions(golds, std::move(preds));
    double f1_sum = 0;
    int perfect = 0;
    std::map<std::string, std::pair<int, int>> recall; // depth -> (gold, recalled)
    for (size_t i = 0; i < golds.size(); ++i) {
        auto gold = detail::split_fact_list(golds[i].answer);
        auto pred = detail::split_fact_list(aligned[i].answer);
        detail::SetScores s = detail::set_scores(pred, gold);
        f1_sum += s.f1;
        perfect += s.f1 >= 1.0 - 1e-12;

        if (gold.empty()) {
            auto& slot = recall["N/A"];
            slot.first += 1;
            slot.second += pred.empty();
        } else {
            std::vector<std::string> gold_vec(gold.begin(), gold.end());
            // fact_depths align with the answer's fact order
            std::vector<std::string> ordered;
            std::string ans = golds[i].answer;
            size_t start = 0;
            while (start <= ans.size()) {
                size_t next = ans.find(" , ", start);
                ordered.push_back(detail::normalize_sentence(
                    next == std::string::npos ? ans.substr(start) : ans.substr(start, next - start)));
                if (next == std::string::npos) break;
                start = next + 3;
            }
            std::set<std::string> ps(pred.begin(), pred.end());
            for (size_t k = 0; k < ordered.size(); ++k) {
                std::optional<int> d = k < golds[i].fact_depths.size() ? golds[i].fact_depths[k]
                                                                       : std::nullopt;
                auto& slot = recall[detail::depth_label(d)];
                slot.first += 1;
                slot.second += ps.count(ordered[k]) > 0;
            }
        }
    }
    ScoreReport rep;
    rep.task = "abduction";
    rep.f1 = golds.empty() ? 1.0 : f1_sum / golds.size();
    rep.set_accuracy = golds.empty() ? 1.0 : static_cast<double>(perfect) / golds.size();
    for (const auto& [d, gr] : recall)
        rep.recall_by_depth[d] = {gr.first,
                                  gr.first ? static_cast<double>(gr.second) / gr.first : 0.0};
    DepthRow all{"All", static_cast<int>(golds.size()), rep.set_accuracy, 0, 0};
    rep.rows = {all};
    return rep;
}

// Fraction of prediction proofs that fully verify, bucketed by gold depth.
inline ScoreReport run_verification_audit(const std::vector<DatasetExample>& golds,
                                          std::vector<Prediction> preds,
                                          const GrammarProfile* profile_hint = nullptr) {
    std::vector<Prediction> aligned = align_predictions(golds, std::move(preds));
    std::map<std::string, detail::Bucket> buckets;
    for (size_t i = 0; i < golds.size(); ++i) {
        const DatasetExample& g = golds[i];
        detail::Bucket& b = buckets[detail::depth_label(g.depth)];
        b.count += 1;
        try {
            GrammarProfile profile =
                profile_hint ? *profile_hint : infer_profile(g.parse_theory(people_profile()));
            Theory theory = g.parse_theory(profile);
            std::string norm = detail::normalize_sentence(aligned[i].proof);
            if (aligned[i].proof.empty() || norm == "None.") {
                b.verified += g.proofs.empty() || g.proofs[0] == "None";
                continue;
            }
            ProofDag dag = decode_proof(aligned[i].proof, theory, profile);
            b.verified += dag.valid() && verify_proof(dag, theory).fully_verified();
        } catch (const std::exception&) {
        }
    }
    ScoreReport rep;
    rep.task = "verify";
    rep.rows = detail::bucket_rows(buckets);
    return rep;
}

// ---------------------------------------------------------------------------
// Prediction loading: JSONL {id, answer, proof} or raw T5 output lines.

inline std::vector<Prediction> load_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<Prediction> preds;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '{') {
            nlohmann::json j = nlohmann::json::parse(line);
            preds.push_back(
                {j.value("id", ""), j.value("answer", ""), j.value("proof", "")});
        } else {
            T5Output out = import_t5_output(line);
            preds.push_back({"", out.answer, out.proof.value_or("")});
        }
    }
    return preds;
}

} // namespace proofwriter

#endif
