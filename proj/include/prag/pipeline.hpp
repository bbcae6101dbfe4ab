#pragma once

#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "prag/config.hpp"
#include "prag/corpus.hpp"
#include "prag/embed.hpp"
#include "prag/generate.hpp"
#include "prag/index.hpp"
#include "prag/retrieve.hpp"

namespace prag {

struct QueryResult {
    std::string answer;
    std::vector<ScoredChunk> retrieved;  // final list, post join and rerank
    std::string prompt;
};

// One configured retrieve -> prompt -> generate flow over a frozen chunk set.
// Remote clients can be injected for testing; when absent they are built
// from the config on demand.
class Pipeline {
  public:
    // Builds both indices in-process. A null embedder selects the backend
    // named in cfg (hashed_tfidf fits its IDF table on these chunks).
    Pipeline(std::vector<Chunk> chunks, PipelineConfig cfg,
             std::shared_ptr<Embedder> embedder = nullptr,
             std::shared_ptr<RerankClient> rerank_client = nullptr,
             std::shared_ptr<GenerateClient> generate_client = nullptr);

    // Adopts artifacts that were built and persisted earlier.
    Pipeline(std::vector<Chunk> chunks, PipelineConfig cfg, Bm25Index bm25,
             VectorIndex vectors, std::shared_ptr<Embedder> embedder,
             std::shared_ptr<RerankClient> rerank_client = nullptr,
             std::shared_ptr<GenerateClient> generate_client = nullptr);

    QueryResult run(const std::string& raw_query) const;

    // Retrieval stage only (join + rerank, no prompt or generation).
    std::vector<ScoredChunk> retrieve_only(const std::string& raw_query) const;

    const std::vector<Chunk>& chunks() const { return chunks_; }
    const Chunk& chunk_by_id(const std::string& id) const;
    const PipelineConfig& config() const { return cfg_; }
    const Bm25Index& bm25() const { return bm25_; }
    const VectorIndex& vectors() const { return vectors_; }
    const Embedder& embedder() const { return *embedder_; }

  private:
    void index_chunks();
    void finish_setup();
    std::vector<ScoredChunk> retrieve_normalized(const std::string& query) const;

    std::vector<Chunk> chunks_;
    PipelineConfig cfg_;
    std::unordered_map<std::string, size_t> chunk_pos_;
    Bm25Index bm25_;
    VectorIndex vectors_;
    std::shared_ptr<Embedder> embedder_;
    std::shared_ptr<RerankClient> rerank_client_;
    std::shared_ptr<GenerateClient> generate_client_;
};

}  // namespace prag
