#pragma once

#include <string>
#include <vector>

#include "prag/config.hpp"
#include "prag/eval.hpp"
#include "prag/retrieve.hpp"

namespace prag {

enum class SweepObjective { retrieval_top1_pct, e2e_correct_pct };

std::string to_string(SweepObjective objective);
SweepObjective sweep_objective_from_string(const std::string& s);

// Candidate lists for the swept knobs; missing lists stay at single defaults
// so a space file can vary one axis at a time.
struct SearchSpace {
    std::vector<int> chunk_size_tokens{128};
    std::vector<int> overlap_tokens{32};
    std::vector<int> bm25_top_k{4};
    std::vector<int> dense_top_k{8};
    std::vector<int> join_cap{12};
    std::vector<FusionMethod> fusion{FusionMethod::concat_maxnorm};
    std::vector<RerankerBackend> reranker{RerankerBackend::identity};

    void validate() const;  // every list non-empty
    std::size_t size() const;
};

// Strict JSON: {"chunk_size_tokens": [...], ...}; unknown keys rejected.
SearchSpace load_search_space(const std::string& path);

enum class TrialStatus { ok, skipped, failed };

std::string to_string(TrialStatus status);

struct TrialConfig {
    int chunk_size_tokens = 128;
    int overlap_tokens = 32;
    int bm25_top_k = 4;
    int dense_top_k = 8;
    int join_cap = 12;
    FusionMethod fusion = FusionMethod::concat_maxnorm;
    RerankerBackend reranker = RerankerBackend::identity;
};

struct TrialResult {
    int trial_index = 0;  // position in enumeration order
    TrialConfig config;
    SweepObjective objective = SweepObjective::retrieval_top1_pct;
    TrialStatus status = TrialStatus::ok;
    double value = 0.0;             // meaningful only when status == ok
    double duration_seconds = 0.0;  // in-memory only; kept out of the trial
                                    // log so reruns are byte-identical
    std::string message;            // skip or failure reason
};

// Percentage of examples whose top-1 retrieved chunk belongs to the gold
// paragraph's document (the retrieval-only objective).
double retrieval_top1_pct(const std::vector<QAExample>& dataset, const Pipeline& pipeline,
                          const std::unordered_map<std::string, std::string>& gold_doc_ids);

// Applies one trial's knobs on top of a base configuration.
PipelineConfig apply_trial(const PipelineConfig& base, const TrialConfig& trial);

// Evaluates one configuration from scratch (chunk, index, evaluate).
double evaluate_objective(const std::vector<QAExample>& dataset, const PipelineConfig& cfg,
                          SweepObjective objective);

// Full grid in lexicographic order (chunk size, overlap, bm25_top_k,
// dense_top_k, join_cap, fusion, reranker). Invalid combinations
// (overlap >= size) are recorded as skipped; a trial that throws is recorded
// as failed; the sweep always continues. The log at trial_log_path (when
// given) is JSON Lines in enumeration order. The returned list is sorted by
// objective value descending, ties by enumeration order, with non-ok trials
// after all ok ones.
std::vector<TrialResult> sweep(const SearchSpace& space, const std::vector<QAExample>& dataset,
                               SweepObjective objective, const PipelineConfig& base,
                               const std::string& trial_log_path = "");

std::string format_sweep_summary(const std::vector<TrialResult>& results);

}  // namespace prag
