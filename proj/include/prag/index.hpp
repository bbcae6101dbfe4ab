#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "prag/corpus.hpp"
#include "prag/embed.hpp"

namespace prag {

enum class RetrievalSource { bm25, dense, joined, reranked };

std::string to_string(RetrievalSource source);
RetrievalSource retrieval_source_from_string(const std::string& s);

struct ScoredChunk {
    std::string chunk_id;
    double score = 0.0;
    int rank = 0;  // 1-based within its result list
    RetrievalSource source = RetrievalSource::bm25;
};

struct Bm25Params {
    double k1 = 1.2;
    double b = 0.75;
};

// Okapi BM25 over normalized-token chunks. Scores sum over distinct query
// terms; chunks scoring zero are omitted; ties break by chunk_id ascending.
class Bm25Index {
  public:
    static Bm25Index build(const std::vector<Chunk>& chunks, Bm25Params params = {});

    std::vector<ScoredChunk> search(const std::string& query, int top_k) const;

    // IDF(t) = ln((N - df + 0.5) / (df + 0.5) + 1)
    double idf(const std::string& term) const;

    std::int64_t size() const { return static_cast<std::int64_t>(doc_ids_.size()); }
    double avgdl() const { return avgdl_; }
    const Bm25Params& params() const { return params_; }

    void save(const std::string& path) const;
    static Bm25Index load(const std::string& path);

  private:
    Bm25Params params_;
    std::vector<std::string> doc_ids_;           // sorted ascending
    std::vector<std::int64_t> doc_lengths_;      // parallel to doc_ids_
    double avgdl_ = 0.0;
    // term -> list of (doc index, term frequency), doc index ascending
    std::unordered_map<std::string, std::vector<std::pair<std::int32_t, std::int32_t>>> postings_;
};

// Exact-scan cosine index. Every stored vector is kept L2-normalized; a zero
// vector is rejected at add time because it has no direction to compare.
class VectorIndex {
  public:
    VectorIndex() = default;
    explicit VectorIndex(int dim) : dim_(dim) {}

    void add(const std::string& chunk_id, EmbeddingVector vec);

    // Exact top_k by cosine over all entries, sorted by score descending,
    // ties by chunk_id ascending.
    std::vector<ScoredChunk> search(const EmbeddingVector& query, int top_k) const;

    std::int64_t size() const { return static_cast<std::int64_t>(ids_.size()); }
    int dim() const { return dim_; }
    bool contains(const std::string& chunk_id) const { return by_id_.count(chunk_id) > 0; }

    void save(const std::string& path) const;
    static VectorIndex load(const std::string& path);

  private:
    int dim_ = 0;  // 0 until the first vector arrives
    std::vector<std::string> ids_;
    std::vector<EmbeddingVector> vectors_;
    std::unordered_map<std::string, size_t> by_id_;
};

}  // namespace prag
