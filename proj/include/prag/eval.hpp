#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "prag/embed.hpp"
#include "prag/pipeline.hpp"

namespace prag {

struct QAExample {
    std::string paragraph;
    std::string question;
    std::string gold_answer;
    std::optional<std::string> question_type;
    std::optional<std::string> source_file;
};

// JSON Lines, one {"paragraph", "question", "gold_answer"[, "question_type",
// "source_file"]} object per line; text fields are normalized on load.
std::vector<QAExample> load_dataset(const std::string& path,
                                    const NormalizationConfig& norm_cfg);

struct RankBucketReport {
    std::int64_t total = 0;
    std::int64_t top1 = 0;
    std::int64_t top2 = 0;
    std::int64_t top3 = 0;
    std::int64_t top4_10 = 0;
    std::int64_t missed = 0;

    double pct(std::int64_t count) const;  // 100*count/total, 0 when empty
};

struct RankRecord {
    std::string question;
    std::string paragraph_id;
    int rank = 0;  // 0 when the gold paragraph was not in the top k
    std::string bucket;
};

// The embedding-ranking protocol: index each unique paragraph once, embed
// every question, and bucket the rank of the question's own paragraph among
// the k nearest. Questions (or paragraphs) embedding to zero count as
// missed. k defaults to 10.
RankBucketReport eval_embedding_ranking(const std::vector<QAExample>& dataset,
                                        const Embedder& embedder, int k = 10,
                                        std::vector<RankRecord>* records = nullptr);

enum class GradeLabel { wrong, middle, correct };

std::string to_string(GradeLabel label);

// Grading canonical form: normalization defaults, ZWNJ removed, ASCII
// lowercased, punctuation mapped to space, whitespace collapsed.
std::string canonical_answer_form(const std::string& text);

// correct: canonical exact match, or canonical gold is a contiguous
// substring of canonical predicted. middle: token-overlap F1 >= 0.5.
// wrong: everything else.
GradeLabel grade_answer(const std::string& predicted, const std::string& gold);

struct GradeReport {
    std::int64_t total = 0;
    std::int64_t wrong = 0;
    std::int64_t middle = 0;
    std::int64_t correct = 0;

    double pct(std::int64_t count) const;
};

struct EvalRecord {
    std::string question;
    std::string gold_answer;
    std::string predicted;
    GradeLabel label = GradeLabel::wrong;
    std::vector<std::string> retrieved_ids;
    std::optional<int> rank_of_gold;  // final-list rank of the gold document
};

// Unique-paragraph documents for a dataset (ids p00001, ... in first-
// appearance order) plus the paragraph-text -> doc-id map for locating the
// gold document in retrieval output.
struct ParagraphCorpus {
    std::vector<Document> documents;
    std::unordered_map<std::string, std::string> doc_id_by_paragraph;
};

ParagraphCorpus paragraph_corpus(const std::vector<QAExample>& dataset,
                                 const NormalizationConfig& norm_cfg);

// Chunks the dataset's unique paragraphs and builds a pipeline over them.
struct RagHarness {
    std::unique_ptr<Pipeline> pipeline;
    std::unordered_map<std::string, std::string> doc_id_by_paragraph;
};

RagHarness build_rag_harness(const std::vector<QAExample>& dataset, const PipelineConfig& cfg,
                             std::shared_ptr<Embedder> embedder = nullptr,
                             std::shared_ptr<RerankClient> rerank_client = nullptr,
                             std::shared_ptr<GenerateClient> generate_client = nullptr);

// Runs retrieve -> prompt -> generate -> grade per example. A remote-service
// failure or empty retrieval grades that example wrong instead of aborting
// the run. Per-example records go to results_path (JSON Lines) when given.
GradeReport eval_end_to_end(const std::vector<QAExample>& dataset, const Pipeline& pipeline,
                            const std::unordered_map<std::string, std::string>& gold_doc_ids,
                            const std::string& results_path = "",
                            std::vector<EvalRecord>* records = nullptr);

// Aligned text tables; the grade table footer names the grading rule so the
// numbers are interpretable.
std::string format_report(const RankBucketReport& report);
std::string format_report(const GradeReport& report);

}  // namespace prag
