#include "prag/retrieve.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "prag/errors.hpp"
#include "prag/textnorm.hpp"

namespace prag {

namespace {

// Min-max normalization within one list; constant lists map to 1.0 so a
// singleton result still outranks nothing on scale alone.
std::vector<double> maxnorm_scores(const std::vector<ScoredChunk>& list) {
    std::vector<double> out(list.size(), 1.0);
    if (list.empty()) return out;
    double lo = list.front().score, hi = list.front().score;
    for (const ScoredChunk& s : list) {
        lo = std::min(lo, s.score);
        hi = std::max(hi, s.score);
    }
    if (hi > lo) {
        for (size_t i = 0; i < list.size(); ++i) {
            out[i] = (list[i].score - lo) / (hi - lo);
        }
    }
    return out;
}

void accumulate_max(std::map<std::string, double>& fused, const std::string& id, double score) {
    auto [it, inserted] = fused.emplace(id, score);
    if (!inserted && score > it->second) it->second = score;
}

}  // namespace

std::string to_string(FusionMethod fusion) {
    return fusion == FusionMethod::rrf ? "rrf" : "concat_maxnorm";
}

FusionMethod fusion_from_string(const std::string& s) {
    if (s == "concat_maxnorm") return FusionMethod::concat_maxnorm;
    if (s == "rrf") return FusionMethod::rrf;
    throw Error("unknown fusion method: " + s);
}

std::string to_string(RerankerBackend backend) {
    switch (backend) {
        case RerankerBackend::identity: return "identity";
        case RerankerBackend::lexical_overlap: return "lexical_overlap";
        case RerankerBackend::remote: return "remote";
    }
    return "identity";
}

RerankerBackend reranker_backend_from_string(const std::string& s) {
    if (s == "identity") return RerankerBackend::identity;
    if (s == "lexical_overlap") return RerankerBackend::lexical_overlap;
    if (s == "remote") return RerankerBackend::remote;
    throw Error("unknown reranker backend: " + s);
}

void HybridConfig::validate() const {
    if (bm25_top_k < 1 || dense_top_k < 1 || join_cap < 1 || rrf_k < 1) {
        throw Error("hybrid config: bm25_top_k, dense_top_k, join_cap and rrf_k must all be >= 1");
    }
}

void RerankerConfig::validate() const {
    if (top_n < 1) {
        throw Error("reranker config: top_n must be >= 1, got " + std::to_string(top_n));
    }
}

std::vector<ScoredChunk> join(const std::vector<ScoredChunk>& a,
                              const std::vector<ScoredChunk>& b,
                              const HybridConfig& cfg) {
    cfg.validate();

    // std::map keeps ids ordered, which makes the tie-break free.
    std::map<std::string, double> fused;
    if (cfg.fusion == FusionMethod::concat_maxnorm) {
        const std::vector<double> na = maxnorm_scores(a);
        const std::vector<double> nb = maxnorm_scores(b);
        for (size_t i = 0; i < a.size(); ++i) accumulate_max(fused, a[i].chunk_id, na[i]);
        for (size_t i = 0; i < b.size(); ++i) accumulate_max(fused, b[i].chunk_id, nb[i]);
    } else {
        for (const auto* list : {&a, &b}) {
            for (const ScoredChunk& s : *list) {
                fused[s.chunk_id] += 1.0 / (cfg.rrf_k + s.rank);
            }
        }
    }

    std::vector<ScoredChunk> out;
    out.reserve(fused.size());
    for (const auto& [id, score] : fused) {
        out.push_back({id, score, 0, RetrievalSource::joined});
    }
    std::stable_sort(out.begin(), out.end(), [](const ScoredChunk& x, const ScoredChunk& y) {
        return x.score > y.score;  // equal scores keep id order from the map
    });
    if (static_cast<int>(out.size()) > cfg.join_cap) {
        out.resize(static_cast<size_t>(cfg.join_cap));
    }
    for (size_t i = 0; i < out.size(); ++i) out[i].rank = static_cast<int>(i) + 1;
    return out;
}

std::vector<ScoredChunk> rerank(const std::string& query,
                                const std::vector<ScoredChunk>& candidates,
                                const RerankerConfig& cfg,
                                const ChunkTextLookup& chunk_text,
                                RerankClient* client) {
    cfg.validate();
    if (candidates.empty()) {
        throw EmptyCandidatesError("rerank: no candidates");
    }

    std::vector<ScoredChunk> pool(
        candidates.begin(),
        candidates.begin() + std::min<size_t>(candidates.size(), static_cast<size_t>(cfg.top_n)));

    if (cfg.backend == RerankerBackend::identity) {
        return pool;
    }

    std::vector<double> scores(pool.size(), 0.0);
    if (cfg.backend == RerankerBackend::lexical_overlap) {
        const std::vector<std::string> q = token_texts(query);
        for (size_t i = 0; i < pool.size(); ++i) {
            scores[i] = token_overlap_f1(q, token_texts(chunk_text(pool[i].chunk_id)));
        }
    } else {
        if (client == nullptr) {
            throw Error("rerank: remote backend requires a client");
        }
        std::vector<std::string> documents;
        documents.reserve(pool.size());
        for (const ScoredChunk& s : pool) documents.push_back(chunk_text(s.chunk_id));

        std::vector<RerankEntry> entries =
            client->rerank(query, documents, static_cast<int>(pool.size()));
        std::unordered_set<int> seen;
        for (const RerankEntry& e : entries) {
            if (e.index < 0 || e.index >= static_cast<int>(pool.size()) ||
                !seen.insert(e.index).second) {
                throw RemoteServiceError("rerank: response index out of range or repeated: " +
                                         std::to_string(e.index));
            }
            scores[static_cast<size_t>(e.index)] = e.relevance_score;
        }
        if (seen.size() != pool.size()) {
            throw RemoteServiceError("rerank: response covered " + std::to_string(seen.size()) +
                                     " of " + std::to_string(pool.size()) + " documents");
        }
    }

    std::vector<size_t> order(pool.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&scores](size_t x, size_t y) { return scores[x] > scores[y]; });

    std::vector<ScoredChunk> out;
    out.reserve(pool.size());
    for (size_t i = 0; i < order.size(); ++i) {
        ScoredChunk s = pool[order[i]];
        s.score = scores[order[i]];
        s.rank = static_cast<int>(i) + 1;
        s.source = RetrievalSource::reranked;
        out.push_back(std::move(s));
    }
    return out;
}

std::vector<ScoredChunk> HybridRetriever::retrieve(const std::string& query,
                                                   const HybridConfig& cfg) const {
    cfg.validate();
    const std::vector<ScoredChunk> lexical = bm25_->search(query, cfg.bm25_top_k);

    std::vector<ScoredChunk> dense;
    if (dense_->size() > 0) {
        const EmbeddingVector qv = embedder_->embed_one(query);
        if (!qv.is_zero()) {
            dense = dense_->search(qv, cfg.dense_top_k);
        }
    }
    return join(lexical, dense, cfg);
}

}  // namespace prag
