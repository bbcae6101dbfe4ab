#include "prag/tune.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "prag/errors.hpp"

#include <nlohmann/json.hpp>

namespace prag {

namespace {

nlohmann::json trial_log_record(const TrialResult& r) {
    nlohmann::json j{
        {"trial", r.trial_index},
        {"status", to_string(r.status)},
        {"objective", to_string(r.objective)},
        {"value", r.status == TrialStatus::ok ? nlohmann::json(r.value) : nlohmann::json()},
        {"config",
         {
             {"chunk_size_tokens", r.config.chunk_size_tokens},
             {"overlap_tokens", r.config.overlap_tokens},
             {"bm25_top_k", r.config.bm25_top_k},
             {"dense_top_k", r.config.dense_top_k},
             {"join_cap", r.config.join_cap},
             {"fusion", to_string(r.config.fusion)},
             {"reranker", to_string(r.config.reranker)},
         }},
    };
    if (!r.message.empty()) j["message"] = r.message;
    return j;
}

template <typename T, typename Parse>
void read_list(const nlohmann::json& root, const char* key, std::vector<T>& out, Parse parse) {
    if (!root.contains(key)) return;
    if (!root[key].is_array() || root[key].empty()) {
        throw Error(std::string("search space: '") + key + "' must be a non-empty array");
    }
    out.clear();
    for (const auto& item : root[key]) {
        out.push_back(parse(item));
    }
}

int parse_int(const nlohmann::json& item) {
    if (!item.is_number_integer()) {
        throw Error("search space: expected an integer candidate");
    }
    return item.get<int>();
}

}  // namespace

std::string to_string(SweepObjective objective) {
    return objective == SweepObjective::e2e_correct_pct ? "e2e_correct_pct"
                                                        : "retrieval_top1_pct";
}

SweepObjective sweep_objective_from_string(const std::string& s) {
    if (s == "retrieval_top1_pct") return SweepObjective::retrieval_top1_pct;
    if (s == "e2e_correct_pct") return SweepObjective::e2e_correct_pct;
    throw Error("unknown sweep objective: " + s);
}

std::string to_string(TrialStatus status) {
    switch (status) {
        case TrialStatus::ok: return "ok";
        case TrialStatus::skipped: return "skipped";
        case TrialStatus::failed: return "failed";
    }
    return "ok";
}

void SearchSpace::validate() const {
    if (chunk_size_tokens.empty() || overlap_tokens.empty() || bm25_top_k.empty() ||
        dense_top_k.empty() || join_cap.empty() || fusion.empty() || reranker.empty()) {
        throw Error("search space: every candidate list must be non-empty");
    }
}

std::size_t SearchSpace::size() const {
    return chunk_size_tokens.size() * overlap_tokens.size() * bm25_top_k.size() *
           dense_top_k.size() * join_cap.size() * fusion.size() * reranker.size();
}

SearchSpace load_search_space(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open search space file: " + path);
    }
    nlohmann::json root;
    try {
        in >> root;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("search space is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ParseError(0, "search space root must be a JSON object");
    }
    for (const auto& [key, value] : root.items()) {
        static const std::vector<std::string> allowed = {
            "chunk_size_tokens", "overlap_tokens", "bm25_top_k", "dense_top_k",
            "join_cap",          "fusion",         "reranker"};
        if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
            throw Error("search space: unknown key '" + key + "'");
        }
    }

    SearchSpace space;
    read_list(root, "chunk_size_tokens", space.chunk_size_tokens, parse_int);
    read_list(root, "overlap_tokens", space.overlap_tokens, parse_int);
    read_list(root, "bm25_top_k", space.bm25_top_k, parse_int);
    read_list(root, "dense_top_k", space.dense_top_k, parse_int);
    read_list(root, "join_cap", space.join_cap, parse_int);
    read_list(root, "fusion", space.fusion, [](const nlohmann::json& item) {
        return fusion_from_string(item.get<std::string>());
    });
    read_list(root, "reranker", space.reranker, [](const nlohmann::json& item) {
        return reranker_backend_from_string(item.get<std::string>());
    });
    space.validate();
    return space;
}

double retrieval_top1_pct(const std::vector<QAExample>& dataset, const Pipeline& pipeline,
                          const std::unordered_map<std::string, std::string>& gold_doc_ids) {
    if (dataset.empty()) return 0.0;
    std::int64_t hits = 0;
    for (const QAExample& ex : dataset) {
        const std::vector<ScoredChunk> retrieved = pipeline.retrieve_only(ex.question);
        if (retrieved.empty()) continue;
        const std::string& top = retrieved.front().chunk_id;
        auto it = gold_doc_ids.find(ex.paragraph);
        if (it != gold_doc_ids.end() && top.substr(0, top.find('#')) == it->second) {
            ++hits;
        }
    }
    return 100.0 * static_cast<double>(hits) / static_cast<double>(dataset.size());
}

PipelineConfig apply_trial(const PipelineConfig& base, const TrialConfig& trial) {
    PipelineConfig cfg = base;
    cfg.chunking.chunk_size_tokens = trial.chunk_size_tokens;
    cfg.chunking.overlap_tokens = trial.overlap_tokens;
    cfg.hybrid.bm25_top_k = trial.bm25_top_k;
    cfg.hybrid.dense_top_k = trial.dense_top_k;
    cfg.hybrid.join_cap = trial.join_cap;
    cfg.hybrid.fusion = trial.fusion;
    cfg.reranker.backend = trial.reranker;
    return cfg;
}

double evaluate_objective(const std::vector<QAExample>& dataset, const PipelineConfig& cfg,
                          SweepObjective objective) {
    const RagHarness harness = build_rag_harness(dataset, cfg);
    if (objective == SweepObjective::retrieval_top1_pct) {
        return retrieval_top1_pct(dataset, *harness.pipeline, harness.doc_id_by_paragraph);
    }
    const GradeReport report =
        eval_end_to_end(dataset, *harness.pipeline, harness.doc_id_by_paragraph);
    return report.pct(report.correct);
}

std::vector<TrialResult> sweep(const SearchSpace& space, const std::vector<QAExample>& dataset,
                               SweepObjective objective, const PipelineConfig& base,
                               const std::string& trial_log_path) {
    space.validate();
    if (dataset.empty()) {
        throw EmptyCorpusError("sweep: empty dataset");
    }

    std::ofstream log;
    if (!trial_log_path.empty()) {
        log.open(trial_log_path);
        if (!log) {
            throw Error("cannot open trial log for writing: " + trial_log_path);
        }
    }

    std::vector<TrialResult> results;
    results.reserve(space.size());
    int index = 0;
    for (int size : space.chunk_size_tokens)
        for (int overlap : space.overlap_tokens)
            for (int bm25_k : space.bm25_top_k)
                for (int dense_k : space.dense_top_k)
                    for (int cap : space.join_cap)
                        for (FusionMethod fusion : space.fusion)
                            for (RerankerBackend reranker : space.reranker) {
                                TrialResult r;
                                r.trial_index = index++;
                                r.config = {size, overlap, bm25_k, dense_k,
                                            cap,  fusion,  reranker};
                                r.objective = objective;

                                const auto started = std::chrono::steady_clock::now();
                                if (overlap >= size) {
                                    r.status = TrialStatus::skipped;
                                    r.message = "overlap_tokens >= chunk_size_tokens";
                                } else {
                                    try {
                                        r.value = evaluate_objective(
                                            dataset, apply_trial(base, r.config), objective);
                                    } catch (const std::exception& e) {
                                        r.status = TrialStatus::failed;
                                        r.message = e.what();
                                    }
                                }
                                r.duration_seconds =
                                    std::chrono::duration<double>(
                                        std::chrono::steady_clock::now() - started)
                                        .count();

                                if (log.is_open()) {
                                    log << trial_log_record(r).dump() << '\n';
                                }
                                results.push_back(std::move(r));
                            }

    std::stable_sort(results.begin(), results.end(),
                     [](const TrialResult& a, const TrialResult& b) {
                         const double av =
                             a.status == TrialStatus::ok ? a.value
                                                         : -std::numeric_limits<double>::infinity();
                         const double bv =
                             b.status == TrialStatus::ok ? b.value
                                                         : -std::numeric_limits<double>::infinity();
                         return av > bv;
                     });
    return results;
}

std::string format_sweep_summary(const std::vector<TrialResult>& results) {
    std::ostringstream os;
    os << std::left << std::setw(6) << "trial" << std::setw(9) << "status" << std::setw(9)
       << "value" << std::setw(6) << "size" << std::setw(9) << "overlap" << std::setw(6) << "k_b"
       << std::setw(6) << "k_d" << std::setw(5) << "cap" << std::setw(16) << "fusion"
       << "reranker\n";
    for (const TrialResult& r : results) {
        std::ostringstream value;
        if (r.status == TrialStatus::ok) {
            value << std::fixed << std::setprecision(1) << r.value;
        } else {
            value << "-";
        }
        os << std::left << std::setw(6) << r.trial_index << std::setw(9) << to_string(r.status)
           << std::setw(9) << value.str() << std::setw(6) << r.config.chunk_size_tokens
           << std::setw(9) << r.config.overlap_tokens << std::setw(6) << r.config.bm25_top_k
           << std::setw(6) << r.config.dense_top_k << std::setw(5) << r.config.join_cap
           << std::setw(16) << to_string(r.config.fusion) << to_string(r.config.reranker)
           << '\n';
    }
    return os.str();
}

}  // namespace prag
