#include "prag/pipeline.hpp"

#include "prag/errors.hpp"
#include "prag/prompt.hpp"
#include "prag/remote.hpp"
#include "prag/textnorm.hpp"

namespace prag {

Pipeline::Pipeline(std::vector<Chunk> chunks, PipelineConfig cfg,
                   std::shared_ptr<Embedder> embedder,
                   std::shared_ptr<RerankClient> rerank_client,
                   std::shared_ptr<GenerateClient> generate_client)
    : chunks_(std::move(chunks)),
      cfg_(std::move(cfg)),
      embedder_(std::move(embedder)),
      rerank_client_(std::move(rerank_client)),
      generate_client_(std::move(generate_client)) {
    cfg_.validate();
    if (chunks_.empty()) {
        throw EmptyCorpusError("pipeline: no chunks to index");
    }
    if (!embedder_) {
        if (cfg_.embedder.backend == EmbedderBackend::remote) {
            embedder_ = std::make_shared<RemoteEmbedder>(
                RemoteEndpoint{cfg_.embedder.endpoint, cfg_.embedder.timeout_seconds});
        } else {
            embedder_ = std::make_shared<HashedTfidfEmbedder>(cfg_.embedder.dim, fit_idf(chunks_),
                                                              cfg_.embedder.seed);
        }
    }
    index_chunks();
    finish_setup();
}

Pipeline::Pipeline(std::vector<Chunk> chunks, PipelineConfig cfg, Bm25Index bm25,
                   VectorIndex vectors, std::shared_ptr<Embedder> embedder,
                   std::shared_ptr<RerankClient> rerank_client,
                   std::shared_ptr<GenerateClient> generate_client)
    : chunks_(std::move(chunks)),
      cfg_(std::move(cfg)),
      bm25_(std::move(bm25)),
      vectors_(std::move(vectors)),
      embedder_(std::move(embedder)),
      rerank_client_(std::move(rerank_client)),
      generate_client_(std::move(generate_client)) {
    cfg_.validate();
    if (chunks_.empty()) {
        throw EmptyCorpusError("pipeline: no chunks");
    }
    if (!embedder_) {
        throw Error("pipeline: adopted indices need an explicit embedder");
    }
    finish_setup();
}

void Pipeline::index_chunks() {
    bm25_ = Bm25Index::build(chunks_, cfg_.bm25);

    std::vector<std::string> texts;
    texts.reserve(chunks_.size());
    for (const Chunk& c : chunks_) texts.push_back(c.text);
    const std::vector<EmbeddingVector> vectors = embedder_->embed_texts(texts);
    for (size_t i = 0; i < chunks_.size(); ++i) {
        // A chunk embedding to zero stays reachable lexically but cannot be
        // stored in the cosine index.
        if (vectors[i].is_zero()) continue;
        vectors_.add(chunks_[i].id, vectors[i]);
    }
}

void Pipeline::finish_setup() {
    for (size_t i = 0; i < chunks_.size(); ++i) {
        if (!chunk_pos_.emplace(chunks_[i].id, i).second) {
            throw DuplicateIdError("pipeline: duplicate chunk id: " + chunks_[i].id);
        }
    }
    if (cfg_.reranker.backend == RerankerBackend::remote && !rerank_client_) {
        rerank_client_ = std::make_shared<RemoteRerankClient>(
            RemoteEndpoint{cfg_.reranker_endpoint, cfg_.reranker_timeout_seconds});
    }
    if (cfg_.generator.backend == GeneratorBackend::remote && !generate_client_) {
        generate_client_ = std::make_shared<RemoteGenerateClient>(
            RemoteEndpoint{cfg_.generator.endpoint, cfg_.generator.timeout_seconds});
    }
}

const Chunk& Pipeline::chunk_by_id(const std::string& id) const {
    auto it = chunk_pos_.find(id);
    if (it == chunk_pos_.end()) {
        throw Error("pipeline: unknown chunk id: " + id);
    }
    return chunks_[it->second];
}

std::vector<ScoredChunk> Pipeline::retrieve_normalized(const std::string& query) const {
    const HybridRetriever retriever(bm25_, vectors_, *embedder_);
    std::vector<ScoredChunk> retrieved = retriever.retrieve(query, cfg_.hybrid);
    if (!retrieved.empty()) {
        retrieved = rerank(
            query, retrieved, cfg_.reranker,
            [this](const std::string& id) { return chunk_by_id(id).text; },
            rerank_client_.get());
    }
    return retrieved;
}

std::vector<ScoredChunk> Pipeline::retrieve_only(const std::string& raw_query) const {
    return retrieve_normalized(normalize_text(raw_query, cfg_.normalization));
}

QueryResult Pipeline::run(const std::string& raw_query) const {
    const std::string query = normalize_text(raw_query, cfg_.normalization);
    QueryResult result;
    result.retrieved = retrieve_normalized(query);

    PromptParts parts;
    parts.instructions = cfg_.prompt.effective_instructions();
    parts.user_query = query;
    parts.language = cfg_.prompt.language;
    parts.chunks.reserve(result.retrieved.size());
    for (const ScoredChunk& hit : result.retrieved) {
        parts.chunks.push_back(chunk_by_id(hit.chunk_id));
    }
    result.prompt = build_prompt(parts);
    result.answer =
        generate(result.prompt, parts.chunks, query, cfg_.generator, generate_client_.get());
    return result;
}

}  // namespace prag
