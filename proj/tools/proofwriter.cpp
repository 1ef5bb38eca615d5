// proofwriter: command-line surface over the reasoning engine.
//
// Subcommands: parse, solve, prove, enumerate, abduce, iterate, gen, score,
// verify, export-t5. All randomness flows from --seed; repeated runs with the
// same inputs and flags produce byte-identical outputs.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "proofwriter/abduction.hpp"
#include "proofwriter/codec.hpp"
#include "proofwriter/datagen.hpp"
#include "proofwriter/dataset.hpp"
#include "proofwriter/generator.hpp"
#include "proofwriter/metrics.hpp"
#include "proofwriter/remote.hpp"
#include "proofwriter/t5.hpp"

using namespace proofwriter;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string trim_copy(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

SemanticsMode parse_mode(const std::string& m) {
    if (m == "cwa" || m == "CWA") return SemanticsMode::Cwa;
    if (m == "owa" || m == "OWA") return SemanticsMode::Owa;
    throw CLI::ValidationError("--mode must be cwa or owa");
}

ProofDialect parse_dialect(const std::string& d) {
    if (d == "percent") return ProofDialect::PercentConc;
    if (d == "at") return ProofDialect::AtInt;
    throw CLI::ValidationError("--dialect must be percent or at");
}

const GrammarProfile& parse_world(const std::string& w) {
    if (w == "people") return people_profile();
    if (w == "animals") return animals_profile();
    throw CLI::ValidationError("--world must be people or animals");
}

// Accepts either a raw context file or a T5 input string file.
struct LoadedTheory {
    Theory theory;
    GrammarProfile profile;
    std::optional<std::string> embedded_question;
};

LoadedTheory load_theory(const std::string& path, SemanticsMode mode) {
    std::string text = trim_copy(read_file(path));
    LoadedTheory out{Theory{}, people_profile(), std::nullopt};
    std::string context = text;
    if (text.rfind("$answer$", 0) == 0) {
        T5Input in = import_t5_input(text);
        context = in.context;
        if (in.task == TaskKind::Qa || in.task == TaskKind::Abduction)
            out.embedded_question = in.question;
    }
    out.theory = parse_context(context, mode, people_profile());
    out.profile = infer_profile(out.theory);
    return out;
}

Literal require_question(const std::string& question, const LoadedTheory& lt) {
    std::string q = question.empty() ? lt.embedded_question.value_or("") : question;
    if (q.empty()) throw std::runtime_error("no question: pass --question or a T5 input file");
    return parse_question(q, lt.profile);
}

std::string env_generator_url() {
    const char* v = std::getenv("PROOFWRITER_GENERATOR_URL");
    return v ? v : "";
}

nlohmann::ordered_json config_json(const GenConfig& cfg, int n, const std::string& task) {
    nlohmann::ordered_json j;
    j["task"] = task;
    j["mode"] = to_string(cfg.mode);
    j["target_depth"] = cfg.target_depth;
    j["n_theories"] = n;
    j["seed"] = cfg.seed;
    j["entities"] = {cfg.entities.min, cfg.entities.max};
    j["attributes"] = {cfg.attributes.min, cfg.attributes.max};
    j["facts"] = {cfg.facts.min, cfg.facts.max};
    j["rules"] = {cfg.rules.min, cfg.rules.max};
    j["negation_prob"] = cfg.negation_prob;
    j["variable_rule_prob"] = cfg.variable_rule_prob;
    j["two_condition_prob"] = cfg.two_condition_prob;
    j["unprovable_ratio"] = cfg.unprovable_ratio;
    j["questions_per_theory"] = cfg.questions_per_theory;
    j["max_implications"] = cfg.max_implications;
    j["world"] = cfg.profile.world == GrammarProfile::World::People ? "people" : "animals";
    return j;
}

// Theory-level parallel generation with index-stable output order.
GeneratedBatch gen_batch_parallel(const GenConfig& cfg, int n, TaskKind task, int jobs) {
    if (jobs <= 1) return gen_batch(cfg, n, task);
    std::vector<std::future<GeneratedBatch>> futs;
    int chunk = (n + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
        int lo = j * chunk, hi = std::min(n, (j + 1) * chunk);
        if (lo >= hi) break;
        futs.push_back(std::async(std::launch::async, [=] {
            GeneratedBatch part;
            for (int i = lo; i < hi; ++i) {
                GenConfig tc = cfg;
                tc.seed = fnv1a(std::to_string(cfg.seed) + "/" + std::to_string(i));
                Theory t = gen_theory(tc);
                std::string tid = to_string(cfg.mode) + "-d" +
                                  std::to_string(cfg.target_depth) + "-t" + std::to_string(i);
                part.theories.push_back(t);
                part.theory_ids.push_back(tid);
                switch (task) {
                case TaskKind::Qa: {
                    auto rows = gen_qa_examples(t, tc, tid);
                    part.examples.insert(part.examples.end(), rows.begin(), rows.end());
                    break;
                }
                case TaskKind::IterativeStep: {
                    auto rows = gen_iterative_examples(t, tc, tid);
                    part.examples.insert(part.examples.end(), rows.begin(), rows.end());
                    break;
                }
                case TaskKind::Enumeration:
                    part.examples.push_back(gen_enumeration_example(t, tc, tid));
                    break;
                case TaskKind::Abduction: {
                    auto rows = gen_abduction_examples(t, tc, tid);
                    part.examples.insert(part.examples.end(), rows.begin(), rows.end());
                    break;
                }
                }
            }
            return part;
        }));
    }
    GeneratedBatch batch;
    for (auto& f : futs) {
        GeneratedBatch part = f.get();
        batch.theories.insert(batch.theories.end(), part.theories.begin(), part.theories.end());
        batch.theory_ids.insert(batch.theory_ids.end(), part.theory_ids.begin(),
                                part.theory_ids.end());
        batch.examples.insert(batch.examples.end(), part.examples.begin(), part.examples.end());
    }
    return batch;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"proofwriter: templated natural-language reasoning toolkit"};
    app.require_subcommand(1);

    std::string mode_str = "cwa", dialect_str = "percent", world_str = "people";
    std::string theory_path, question, in_path, out_path, gold_path, pred_path, json_path;
    std::string task_str = "qa", backend_str = "symbolic", generator_url, preset;
    uint64_t seed = 0;
    int n_theories = 100, jobs = 1, depth = 3, max_iterations = 200;
    size_t proof_cap = 5000;
    int max_context_tokens = -1;
    bool lint = false, skeleton = false, t5_flag = false;

    auto add_mode = [&](CLI::App* c) { c->add_option("--mode", mode_str, "cwa|owa"); };
    auto add_theory = [&](CLI::App* c) {
        c->add_option("--theory", theory_path, "context file or T5 input file")->required();
    };

    CLI::App* cmd_parse = app.add_subcommand("parse", "parse a theory and report its shape");
    cmd_parse->add_option("--in", in_path, "context file or T5 input file")->required();
    add_mode(cmd_parse);
    cmd_parse->add_flag("--lint", lint, "run the dataset-repair lint");

    CLI::App* cmd_solve = app.add_subcommand("solve", "answer a question with one proof");
    add_theory(cmd_solve);
    cmd_solve->add_option("--question", question, "question sentence");
    add_mode(cmd_solve);
    cmd_solve->add_option("--dialect", dialect_str, "percent|at");
    cmd_solve->add_option("--proof-cap", proof_cap, "proof enumeration cap");

    CLI::App* cmd_prove = app.add_subcommand("prove", "enumerate all proofs of a question");
    add_theory(cmd_prove);
    cmd_prove->add_option("--question", question, "question sentence");
    add_mode(cmd_prove);
    cmd_prove->add_option("--dialect", dialect_str, "percent|at");
    cmd_prove->add_option("--proof-cap", proof_cap, "proof enumeration cap");

    CLI::App* cmd_enum = app.add_subcommand("enumerate", "list all implications");
    add_theory(cmd_enum);
    add_mode(cmd_enum);
    cmd_enum->add_flag("--t5", t5_flag, "print the T5 answer string instead of lines");

    CLI::App* cmd_abduce = app.add_subcommand("abduce", "single-fact abduction (OWA)");
    add_theory(cmd_abduce);
    cmd_abduce->add_option("--question", question, "unprovable hypothesis");

    CLI::App* cmd_iter = app.add_subcommand("iterate", "run the 1-step generator loop");
    add_theory(cmd_iter);
    cmd_iter->add_option("--question", question, "question sentence");
    add_mode(cmd_iter);
    cmd_iter->add_option("--backend", backend_str, "symbolic|remote");
    cmd_iter->add_option("--generator-url", generator_url,
                         "remote endpoint (or PROOFWRITER_GENERATOR_URL)");
    cmd_iter->add_option("--seed", seed, "tie-break seed for the symbolic backend");
    cmd_iter->add_option("--max-iterations", max_iterations, "iteration limit");
    cmd_iter->add_option("--max-context-tokens", max_context_tokens,
                         "context token limit (default: 512 for remote, unlimited otherwise)");
    cmd_iter->add_option("--dialect", dialect_str, "percent|at");

    CLI::App* cmd_gen = app.add_subcommand("gen", "generate a dataset");
    cmd_gen->add_option("--task", task_str, "qa|iterative|enumeration|abduction");
    add_mode(cmd_gen);
    cmd_gen->add_option("--depth", depth, "target depth (0|1|2|3|5)");
    cmd_gen->add_option("--n", n_theories, "number of theories");
    cmd_gen->add_option("--seed", seed, "generation seed");
    cmd_gen->add_option("--jobs", jobs, "parallel theory generation");
    cmd_gen->add_option("--world", world_str, "people|animals");
    cmd_gen->add_option("--preset", preset, "d5-cwa|d3-ab (overrides tuning knobs)");
    double mix_lower = 0.2;
    cmd_gen->add_option("--mix-lower", mix_lower,
                        "iterative only: ratio of extra lower-depth theories (default 0.2)");
    cmd_gen->add_option("--out", out_path, "output prefix for <prefix>.<split>.jsonl")
        ->required();

    CLI::App* cmd_score = app.add_subcommand("score", "score predictions against gold");
    cmd_score->add_option("--task", task_str, "qa|enumeration|abduction");
    cmd_score->add_option("--gold", gold_path, "gold JSONL")->required();
    cmd_score->add_option("--pred", pred_path, "predictions (JSONL or raw T5 lines)")->required();
    cmd_score->add_flag("--skeleton", skeleton, "ignore intermediate conclusion texts");
    cmd_score->add_option("--json", json_path, "also write the report as JSON");

    CLI::App* cmd_verify = app.add_subcommand("verify", "step-verify prediction proofs");
    cmd_verify->add_option("--gold", gold_path, "gold JSONL")->required();
    cmd_verify->add_option("--pred", pred_path, "predictions (JSONL or raw T5 lines)")
        ->required();
    cmd_verify->add_option("--json", json_path, "also write the report as JSON");

    CLI::App* cmd_export = app.add_subcommand("export-t5", "emit T5 input/output strings");
    cmd_export->add_option("--in", in_path, "dataset JSONL")->required();
    cmd_export->add_option("--out", out_path, "output JSONL of {id, input, output}")->required();
    cmd_export->add_option("--seed", seed, "seed for choosing among shortest proofs");

    CLI11_PARSE(app, argc, argv);

    try {
        SemanticsMode mode = parse_mode(mode_str);
        ProofDialect dialect = parse_dialect(dialect_str);

        if (*cmd_parse) {
            LoadedTheory lt = load_theory(in_path, mode);
            Signature sig = signature_of(lt.theory);
            std::cout << "sentences: " << lt.theory.sentences().size()
                      << " (facts: " << lt.theory.facts().size()
                      << ", rules: " << lt.theory.rules().size() << ")\n";
            std::cout << "entities: " << sig.entities.size()
                      << ", attributes: " << sig.attributes.size()
                      << ", verbs: " << sig.verbs.size() << "\n";
            if (mode == SemanticsMode::Cwa) {
                StratificationResult strat = check_stratifiable(lt.theory);
                std::cout << "stratifiable: " << (strat.ok ? "yes" : "no") << "\n";
                if (!strat.ok) {
                    std::cout << "negation cycle:";
                    for (const auto& p : strat.cycle) std::cout << " " << p;
                    std::cout << "\n";
                }
            } else {
                try {
                    closure(lt.theory);
                    std::cout << "consistent: yes\n";
                } catch (const InconsistentTheoryError&) {
                    std::cout << "consistent: no\n";
                }
            }
            if (lint) {
                auto findings = lint_theory(lt.theory);
                std::cout << "lint: " << (findings.empty() ? "clean" : "") << "\n";
                for (const auto& f : findings) std::cout << "  " << f << "\n";
            }
        } else if (*cmd_solve) {
            LoadedTheory lt = load_theory(theory_path, mode);
            Literal q = require_question(question, lt);
            Closure cl = closure(lt.theory);
            Answer a = answer_with_closure(lt.theory, q, cl);
            std::cout << to_string(a.truth) << "\n";
            if (a.proved) {
                auto en = all_proofs_with_closure(lt.theory, *a.proved, cl,
                                                  ground_instances(lt.theory), proof_cap);
                auto best = shortest_proofs(en.proofs);
                std::cout << (best.empty()
                                  ? "None"
                                  : encode_proof_str(best.front(), dialect, lt.profile))
                          << "\n";
            } else {
                std::cout << "None\n";
            }
            std::cout << "depth: " << (a.depth ? std::to_string(*a.depth) : "N/A") << "\n";
        } else if (*cmd_prove) {
            LoadedTheory lt = load_theory(theory_path, mode);
            Literal q = require_question(question, lt);
            Closure cl = closure(lt.theory);
            Answer a = answer_with_closure(lt.theory, q, cl);
            std::cout << to_string(a.truth) << "\n";
            if (a.proved) {
                auto en = all_proofs_with_closure(lt.theory, *a.proved, cl,
                                                  ground_instances(lt.theory), proof_cap);
                std::cout << "proofs: " << en.proofs.size()
                          << (en.truncated ? " (cap exceeded)" : "") << "\n";
                for (const auto& p : en.proofs)
                    std::cout << encode_proof_str(p, dialect, lt.profile) << "\n";
            } else {
                std::cout << "proofs: 0\n";
            }
        } else if (*cmd_enum) {
            LoadedTheory lt = load_theory(theory_path, mode);
            GenConfig cfg;
            cfg.mode = mode;
            cfg.profile = lt.profile;
            DatasetExample e = gen_enumeration_example(lt.theory, cfg, "cli");
            if (t5_flag) {
                std::cout << "$answer$ = " << e.answer << "\n";
            } else if (e.answer == "None") {
                std::cout << "None\n";
            } else {
                Closure cl = closure(lt.theory);
                std::vector<std::pair<std::pair<int, std::string>, std::string>> rows;
                for (const auto& [lit, imp] : cl.implications) {
                    std::string text = render_fact(lit, lt.profile);
                    rows.push_back({{imp.depth, text}, text});
                }
                std::sort(rows.begin(), rows.end());
                for (const auto& [key, text] : rows)
                    std::cout << "d" << key.first << "  " << text << "\n";
            }
        } else if (*cmd_abduce) {
            LoadedTheory lt = load_theory(theory_path, SemanticsMode::Owa);
            Literal q = require_question(question, lt);
            AbductionAnswer ans = abduce_single_fact(lt.theory, q);
            std::cout << ans.render(lt.profile) << "\n";
        } else if (*cmd_iter) {
            LoadedTheory lt = load_theory(theory_path, mode);
            Literal q = require_question(question, lt);
            std::unique_ptr<OneStepBackend> backend;
            LoopLimits limits;
            limits.max_iterations = max_iterations;
            if (backend_str == "remote") {
                std::string url = generator_url.empty() ? env_generator_url() : generator_url;
                if (url.empty())
                    throw std::runtime_error(
                        "remote backend needs --generator-url or PROOFWRITER_GENERATOR_URL");
                backend = std::make_unique<RemoteBackend>(RemoteConfig{url}, mode, lt.profile);
                limits.max_context_tokens = max_context_tokens < 0 ? 512 : max_context_tokens;
            } else {
                backend = std::make_unique<SymbolicBackend>(mode, lt.profile,
                                                            seed ? std::optional<uint64_t>(seed)
                                                                 : std::nullopt);
                if (max_context_tokens >= 0) limits.max_context_tokens = max_context_tokens;
            }
            LoopResult res = run_iterative_loop(lt.theory, q, *backend, limits, lt.profile);
            for (const auto& step : res.trace)
                std::cout << step.assigned_id.str() << ": " << step.response.answer << "  ["
                          << step.response.proof << "]\n";
            std::cout << to_string(res.truth) << "\n";
            std::cout << (res.proof.valid() ? encode_proof_str(res.proof, dialect, lt.profile)
                                            : "None")
                      << "\n";
        } else if (*cmd_gen) {
            GenConfig cfg;
            if (preset == "d5-cwa") {
                cfg = d5_cwa_config(seed);
            } else if (preset == "d3-ab") {
                cfg = d3_abduction_config(seed);
            } else if (!preset.empty()) {
                throw std::runtime_error("unknown preset: " + preset);
            } else {
                cfg.mode = mode;
                cfg.target_depth = depth;
                cfg.seed = seed;
                cfg.profile = parse_world(world_str);
                if (cfg.profile.world == GrammarProfile::World::Animals) {
                    cfg.verbs = {2, 4};
                    cfg.relation_prob = 0.5;
                }
                if (mode == SemanticsMode::Owa) cfg.negation_prob = 0.2;
            }
            auto task = task_from_string(task_str);
            if (!task) throw std::runtime_error("unknown task: " + task_str);
            GeneratedBatch batch =
                *task == TaskKind::IterativeStep && mix_lower > 0
                    ? gen_iterative_mixed_batch(cfg, n_theories, mix_lower)
                    : gen_batch_parallel(cfg, n_theories, *task, jobs);

            std::map<Split, std::vector<DatasetExample>> by_split;
            for (const auto& e : batch.examples) {
                std::string tid = e.id.substr(0, e.id.find_last_of('-'));
                by_split[split_of(tid)].push_back(e);
            }
            for (Split s : {Split::Train, Split::Dev, Split::Test}) {
                std::string path = out_path + "." + to_string(s) + ".jsonl";
                write_jsonl(path, by_split[s]);
                std::cout << path << ": " << by_split[s].size() << " examples\n";
            }
            std::ofstream cfg_out(out_path + ".config.json");
            cfg_out << config_json(cfg, n_theories, task_str).dump(2) << "\n";
            std::cout << out_path << ".config.json: run configuration\n";
        } else if (*cmd_score) {
            auto golds = read_jsonl(gold_path);
            auto preds = load_predictions(pred_path);
            ScoreReport rep;
            if (task_str == "qa")
                rep = score_qa(golds, preds, skeleton);
            else if (task_str == "enumeration")
                rep = score_enumeration(golds, preds);
            else if (task_str == "abduction")
                rep = score_abduction(golds, preds);
            else
                throw std::runtime_error("unknown task: " + task_str);
            std::cout << rep.text();
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                out << rep.json().dump(2) << "\n";
            }
        } else if (*cmd_verify) {
            auto golds = read_jsonl(gold_path);
            auto preds = load_predictions(pred_path);
            ScoreReport rep = run_verification_audit(golds, preds);
            std::cout << rep.text();
            if (!json_path.empty()) {
                std::ofstream out(json_path);
                out << rep.json().dump(2) << "\n";
            }
        } else if (*cmd_export) {
            auto rows = read_jsonl(in_path);
            std::ofstream out(out_path);
            if (!out) throw std::runtime_error("cannot open for writing: " + out_path);
            for (const auto& e : rows) {
                size_t choice = 0;
                if (e.proofs.size() > 1) {
                    // pick among the shortest proofs, seed-deterministically
                    Theory t = e.parse_theory(people_profile());
                    GrammarProfile profile = infer_profile(t);
                    std::vector<size_t> shortest;
                    int best = std::numeric_limits<int>::max();
                    for (size_t i = 0; i < e.proofs.size(); ++i) {
                        ProofDag dag = decode_proof(e.proofs[i], t, profile);
                        int n = proof_node_count(dag);
                        if (n < best) {
                            best = n;
                            shortest.clear();
                        }
                        if (n == best) shortest.push_back(i);
                    }
                    Rng rng(seed ^ fnv1a(e.id));
                    choice = shortest[rng.below(shortest.size())];
                }
                auto [input, output] = to_t5_strings(e, choice);
                nlohmann::ordered_json j;
                j["id"] = e.id;
                j["input"] = input;
                j["output"] = output;
                out << j.dump() << "\n";
            }
            std::cout << out_path << ": " << rows.size() << " examples\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
