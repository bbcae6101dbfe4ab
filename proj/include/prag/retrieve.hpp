#pragma once

#include <functional>
#include <string>
#include <vector>

#include "prag/embed.hpp"
#include "prag/index.hpp"

namespace prag {

enum class FusionMethod { concat_maxnorm, rrf };

std::string to_string(FusionMethod fusion);
FusionMethod fusion_from_string(const std::string& s);

struct HybridConfig {
    int bm25_top_k = 4;
    int dense_top_k = 8;
    int join_cap = 12;
    FusionMethod fusion = FusionMethod::concat_maxnorm;
    int rrf_k = 60;

    void validate() const;  // throws Error when any knob is < 1
};

enum class RerankerBackend { identity, lexical_overlap, remote };

std::string to_string(RerankerBackend backend);
RerankerBackend reranker_backend_from_string(const std::string& s);

struct RerankerConfig {
    RerankerBackend backend = RerankerBackend::identity;
    int top_n = 12;

    void validate() const;
};

struct RerankEntry {
    int index = 0;  // position in the submitted document list
    double relevance_score = 0.0;
};

// Transport-level reranker; the HTTP client in remote.hpp implements this.
class RerankClient {
  public:
    virtual ~RerankClient() = default;
    virtual std::vector<RerankEntry> rerank(const std::string& query,
                                            const std::vector<std::string>& documents,
                                            int top_n) = 0;
};

// Fuses two rank lists: duplicates collapse to one entry, scores combine per
// cfg.fusion (concat_maxnorm: per-list min-max to [0,1], duplicate keeps the
// larger value; rrf: sum of 1/(rrf_k + rank)). Result is sorted by fused
// score descending (ties by chunk_id ascending), truncated to join_cap, with
// ranks 1..n and source=joined.
std::vector<ScoredChunk> join(const std::vector<ScoredChunk>& a,
                              const std::vector<ScoredChunk>& b,
                              const HybridConfig& cfg);

using ChunkTextLookup = std::function<std::string(const std::string& chunk_id)>;

// Reorders the first min(top_n, n) candidates. identity returns them
// untouched; lexical_overlap sorts by token-overlap F1 against the query
// (stable, so ties keep their prior order); remote asks the client and
// requires a score for every submitted document. Non-identity backends
// reassign ranks 1..n and set source=reranked.
std::vector<ScoredChunk> rerank(const std::string& query,
                                const std::vector<ScoredChunk>& candidates,
                                const RerankerConfig& cfg,
                                const ChunkTextLookup& chunk_text,
                                RerankClient* client = nullptr);

// Runs the lexical and dense searches for one query and joins the results.
// A query that embeds to the zero vector contributes an empty dense list
// instead of failing the whole retrieval.
class HybridRetriever {
  public:
    HybridRetriever(const Bm25Index& bm25, const VectorIndex& dense, const Embedder& embedder)
        : bm25_(&bm25), dense_(&dense), embedder_(&embedder) {}

    std::vector<ScoredChunk> retrieve(const std::string& query, const HybridConfig& cfg) const;

  private:
    const Bm25Index* bm25_;
    const VectorIndex* dense_;
    const Embedder* embedder_;
};

}  // namespace prag
