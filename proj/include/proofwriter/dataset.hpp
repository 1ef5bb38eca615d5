#ifndef PROOFWRITER_DATASET_HPP
#define PROOFWRITER_DATASET_HPP

#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "proofwriter/grammar.hpp"
#include "proofwriter/model.hpp"
#include "proofwriter/t5.hpp"

// JSONL interchange schema: one example per line with fields
//   {id, theory:[{id,text}], question, answer, depth, proofs, task, mode}
// plus fact_depths on abduction rows (per-fact completed-proof depth).

namespace proofwriter {

struct DatasetExample {
    std::string id;
    std::vector<std::pair<std::string, std::string>> theory; // (sentence id, text)
    std::string question;
    std::string answer;
    std::optional<int> depth;        // null = N/A
    std::vector<std::string> proofs; // encoded proof strings
    std::vector<std::optional<int>> fact_depths; // abduction only, aligned with answer facts
    TaskKind task = TaskKind::Qa;
    SemanticsMode mode = SemanticsMode::Cwa;

    std::string context_string() const {
        std::string out;
        for (const auto& [sid, text] : theory) {
            if (!out.empty()) out += " ";
            out += sid + ": " + text;
        }
        return out;
    }

    Theory parse_theory(const GrammarProfile& profile) const {
        return parse_context(context_string(), mode, profile);
    }
};

inline nlohmann::ordered_json to_json(const DatasetExample& e) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    nlohmann::ordered_json th = nlohmann::ordered_json::array();
    for (const auto& [sid, text] : e.theory) th.push_back({{"id", sid}, {"text", text}});
    j["theory"] = th;
    j["question"] = e.question;
    j["answer"] = e.answer;
    if (e.depth)
        j["depth"] = *e.depth;
    else
        j["depth"] = nullptr;
    j["proofs"] = e.proofs;
    if (e.task == TaskKind::Abduction) {
        nlohmann::ordered_json fd = nlohmann::ordered_json::array();
        for (const auto& d : e.fact_depths) {
            if (d)
                fd.push_back(*d);
            else
                fd.push_back(nullptr);
        }
        j["fact_depths"] = fd;
    }
    j["task"] = to_string(e.task);
    j["mode"] = to_string(e.mode);
    return j;
}

inline DatasetExample example_from_json(const nlohmann::json& j) {
    DatasetExample e;
    e.id = j.at("id").get<std::string>();
    for (const auto& s : j.at("theory"))
        e.theory.push_back({s.at("id").get<std::string>(), s.at("text").get<std::string>()});
    e.question = j.at("question").get<std::string>();
    e.answer = j.at("answer").get<std::string>();
    if (j.contains("depth") && !j.at("depth").is_null()) e.depth = j.at("depth").get<int>();
    if (j.contains("proofs"))
        for (const auto& p : j.at("proofs")) e.proofs.push_back(p.get<std::string>());
    if (j.contains("fact_depths"))
        for (const auto& d : j.at("fact_depths")) {
            if (d.is_null())
                e.fact_depths.push_back(std::nullopt);
            else
                e.fact_depths.push_back(d.get<int>());
        }
    if (auto t = task_from_string(j.value("task", "qa"))) e.task = *t;
    e.mode = j.value("mode", "CWA") == "OWA" ? SemanticsMode::Owa : SemanticsMode::Cwa;
    return e;
}

inline void write_jsonl(const std::string& path, const std::vector<DatasetExample>& rows) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& e : rows) out << to_json(e).dump() << "\n";
}

inline std::vector<DatasetExample> read_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::vector<DatasetExample> rows;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            rows.push_back(example_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return rows;
}

// The example as a (input, output) T5 string pair. proof_choice selects among
// the example's proofs (training picks one of the shortest at random).
inline std::pair<std::string, std::string> to_t5_strings(const DatasetExample& e,
                                                         size_t proof_choice = 0) {
    T5Input in;
    in.task = e.task;
    in.context = e.context_string();
    switch (e.task) {
    case TaskKind::Qa: in.question = e.question; break;
    case TaskKind::IterativeStep: in.question = kIterativeQuestion; break;
    case TaskKind::Enumeration: in.question = kEnumerationQuestion; break;
    case TaskKind::Abduction: in.question = e.question; break;
    }
    T5Output out;
    out.answer = e.answer;
    if (e.task == TaskKind::Qa || e.task == TaskKind::IterativeStep) {
        if (e.proofs.empty())
            out.proof = "None";
        else
            out.proof = e.proofs[proof_choice % e.proofs.size()];
    }
    return {format_t5_input(in), format_t5_output(out)};
}

} // namespace proofwriter

#endif
