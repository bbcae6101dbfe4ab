#include "prag/index.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "prag/errors.hpp"
#include "prag/textnorm.hpp"

#include <nlohmann/json.hpp>

namespace prag {

namespace {

void require_positive_top_k(int top_k, const char* where) {
    if (top_k < 1) {
        throw Error(std::string(where) + ": top_k must be >= 1, got " +
                    std::to_string(top_k));
    }
}

// Shared ordering for result lists: score descending, chunk_id ascending.
void sort_and_rank(std::vector<ScoredChunk>& hits, int top_k, RetrievalSource source) {
    std::sort(hits.begin(), hits.end(), [](const ScoredChunk& a, const ScoredChunk& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.chunk_id < b.chunk_id;
    });
    if (static_cast<int>(hits.size()) > top_k) {
        hits.resize(static_cast<size_t>(top_k));
    }
    for (size_t i = 0; i < hits.size(); ++i) {
        hits[i].rank = static_cast<int>(i) + 1;
        hits[i].source = source;
    }
}

}  // namespace

std::string to_string(RetrievalSource source) {
    switch (source) {
        case RetrievalSource::bm25: return "bm25";
        case RetrievalSource::dense: return "dense";
        case RetrievalSource::joined: return "joined";
        case RetrievalSource::reranked: return "reranked";
    }
    return "bm25";
}

RetrievalSource retrieval_source_from_string(const std::string& s) {
    if (s == "bm25") return RetrievalSource::bm25;
    if (s == "dense") return RetrievalSource::dense;
    if (s == "joined") return RetrievalSource::joined;
    if (s == "reranked") return RetrievalSource::reranked;
    throw Error("unknown retrieval source: " + s);
}

Bm25Index Bm25Index::build(const std::vector<Chunk>& chunks, Bm25Params params) {
    if (chunks.empty()) {
        throw EmptyCorpusError("bm25_build: no chunks");
    }
    Bm25Index index;
    index.params_ = params;

    // Sort ids up front so postings hold ascending doc indices and tie-breaks
    // need no extra lookups.
    std::vector<const Chunk*> ordered;
    ordered.reserve(chunks.size());
    for (const Chunk& c : chunks) ordered.push_back(&c);
    std::sort(ordered.begin(), ordered.end(),
              [](const Chunk* a, const Chunk* b) { return a->id < b->id; });
    for (size_t i = 0; i + 1 < ordered.size(); ++i) {
        if (ordered[i]->id == ordered[i + 1]->id) {
            throw DuplicateIdError("bm25_build: duplicate chunk id: " + ordered[i]->id);
        }
    }

    std::int64_t total_len = 0;
    for (const Chunk* c : ordered) {
        const std::int32_t doc = static_cast<std::int32_t>(index.doc_ids_.size());
        index.doc_ids_.push_back(c->id);

        std::unordered_map<std::string, std::int32_t> tf;
        for (const std::string& t : token_texts(c->text)) ++tf[t];
        std::int64_t len = 0;
        for (const auto& [term, count] : tf) {
            index.postings_[term].emplace_back(doc, count);
            len += count;
        }
        index.doc_lengths_.push_back(len);
        total_len += len;
    }
    index.avgdl_ = static_cast<double>(total_len) / static_cast<double>(ordered.size());
    return index;
}

double Bm25Index::idf(const std::string& term) const {
    auto it = postings_.find(term);
    const double df = it == postings_.end() ? 0.0 : static_cast<double>(it->second.size());
    const double n = static_cast<double>(doc_ids_.size());
    return std::log((n - df + 0.5) / (df + 0.5) + 1.0);
}

std::vector<ScoredChunk> Bm25Index::search(const std::string& query, int top_k) const {
    require_positive_top_k(top_k, "bm25_search");

    std::vector<std::string> terms = token_texts(query);
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    std::unordered_map<std::int32_t, double> scores;
    for (const std::string& term : terms) {
        auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const double term_idf = idf(term);
        for (const auto& [doc, tf] : it->second) {
            const double dl = static_cast<double>(doc_lengths_[static_cast<size_t>(doc)]);
            const double denom =
                tf + params_.k1 * (1.0 - params_.b + params_.b * dl / avgdl_);
            scores[doc] += term_idf * (tf * (params_.k1 + 1.0)) / denom;
        }
    }

    std::vector<ScoredChunk> hits;
    hits.reserve(scores.size());
    for (const auto& [doc, score] : scores) {
        if (score == 0.0) continue;
        hits.push_back({doc_ids_[static_cast<size_t>(doc)], score, 0, RetrievalSource::bm25});
    }
    sort_and_rank(hits, top_k, RetrievalSource::bm25);
    return hits;
}

void Bm25Index::save(const std::string& path) const {
    nlohmann::json postings = nlohmann::json::object();
    for (const auto& [term, list] : postings_) {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& [doc, tf] : list) rows.push_back({doc, tf});
        postings[term] = std::move(rows);
    }
    nlohmann::json j{
        {"magic", "PRAG1"},
        {"kind", "bm25_index"},
        {"k1", params_.k1},
        {"b", params_.b},
        {"doc_ids", doc_ids_},
        {"doc_lengths", doc_lengths_},
        {"avgdl", avgdl_},
        {"postings", std::move(postings)},
    };
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

Bm25Index Bm25Index::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("invalid index file: ") + e.what());
    }
    if (!j.contains("magic") || j["magic"] != "PRAG1") {
        throw ParseError(0, "index file missing PRAG1 magic");
    }
    Bm25Index index;
    index.params_.k1 = j.at("k1").get<double>();
    index.params_.b = j.at("b").get<double>();
    index.doc_ids_ = j.at("doc_ids").get<std::vector<std::string>>();
    index.doc_lengths_ = j.at("doc_lengths").get<std::vector<std::int64_t>>();
    index.avgdl_ = j.at("avgdl").get<double>();
    for (const auto& [term, rows] : j.at("postings").items()) {
        auto& list = index.postings_[term];
        for (const auto& row : rows) {
            list.emplace_back(row.at(0).get<std::int32_t>(), row.at(1).get<std::int32_t>());
        }
    }
    return index;
}

void VectorIndex::add(const std::string& chunk_id, EmbeddingVector vec) {
    if (dim_ == 0) {
        dim_ = vec.dim;
    } else if (vec.dim != dim_) {
        throw DimensionMismatchError("vector_add: expected dim " + std::to_string(dim_) +
                                     ", got " + std::to_string(vec.dim));
    }
    if (by_id_.count(chunk_id)) {
        throw DuplicateIdError("vector_add: duplicate chunk id: " + chunk_id);
    }
    if (vec.is_zero()) {
        throw ZeroVectorError("vector_add: zero vector for chunk " + chunk_id);
    }
    if (!vec.normalized) {
        vec = l2_normalized(std::move(vec));
    }
    by_id_[chunk_id] = ids_.size();
    ids_.push_back(chunk_id);
    vectors_.push_back(std::move(vec));
}

std::vector<ScoredChunk> VectorIndex::search(const EmbeddingVector& query, int top_k) const {
    require_positive_top_k(top_k, "vector_search");
    if (ids_.empty()) {
        throw EmptyIndexError("vector_search: index is empty");
    }
    if (query.dim != dim_) {
        throw DimensionMismatchError("vector_search: expected dim " + std::to_string(dim_) +
                                     ", got " + std::to_string(query.dim));
    }

    std::vector<ScoredChunk> hits;
    hits.reserve(ids_.size());
    for (size_t i = 0; i < ids_.size(); ++i) {
        hits.push_back({ids_[i], cosine(query, vectors_[i]), 0, RetrievalSource::dense});
    }
    sort_and_rank(hits, top_k, RetrievalSource::dense);
    return hits;
}

void VectorIndex::save(const std::string& path) const {
    nlohmann::json entries = nlohmann::json::array();
    for (size_t i = 0; i < ids_.size(); ++i) {
        entries.push_back({{"id", ids_[i]}, {"values", vectors_[i].values}});
    }
    nlohmann::json j{
        {"magic", "PRAG1"},
        {"kind", "vector_index"},
        {"dim", dim_},
        {"entries", std::move(entries)},
    };
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

VectorIndex VectorIndex::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("invalid index file: ") + e.what());
    }
    if (!j.contains("magic") || j["magic"] != "PRAG1") {
        throw ParseError(0, "index file missing PRAG1 magic");
    }
    VectorIndex index(j.at("dim").get<int>());
    for (const auto& entry : j.at("entries")) {
        EmbeddingVector v;
        v.dim = index.dim_;
        v.values = entry.at("values").get<std::vector<double>>();
        v.normalized = true;  // persisted vectors were normalized at add time
        const std::string id = entry.at("id").get<std::string>();
        index.by_id_[id] = index.ids_.size();
        index.ids_.push_back(id);
        index.vectors_.push_back(std::move(v));
    }
    return index;
}

}  // namespace prag
