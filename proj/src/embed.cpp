#include "prag/embed.hpp"

#include <cmath>
#include <fstream>

#include "prag/errors.hpp"
#include "prag/textnorm.hpp"

#include <nlohmann/json.hpp>

namespace prag {

bool EmbeddingVector::is_zero() const {
    for (double v : values) {
        if (v != 0.0) return false;
    }
    return true;
}

EmbeddingVector l2_normalized(EmbeddingVector v) {
    double sq = 0.0;
    for (double x : v.values) sq += x * x;
    if (sq == 0.0) {
        v.normalized = false;
        return v;
    }
    const double inv = 1.0 / std::sqrt(sq);
    for (double& x : v.values) x *= inv;
    v.normalized = true;
    return v;
}

double cosine(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.dim != v.dim || u.values.size() != v.values.size()) {
        throw DimensionMismatchError("cosine: dimension mismatch (" +
                                     std::to_string(u.dim) + " vs " +
                                     std::to_string(v.dim) + ")");
    }
    double dot = 0.0, su = 0.0, sv = 0.0;
    for (size_t i = 0; i < u.values.size(); ++i) {
        dot += u.values[i] * v.values[i];
        su += u.values[i] * u.values[i];
        sv += v.values[i] * v.values[i];
    }
    if (su == 0.0 || sv == 0.0) {
        throw ZeroVectorError("cosine: zero vector has no direction");
    }
    double c = dot / (std::sqrt(su) * std::sqrt(sv));
    if (c > 1.0) c = 1.0;
    if (c < -1.0) c = -1.0;
    return c;
}

std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed) {
    std::uint64_t h = 0xcbf29ce484222325ULL ^ seed;
    for (unsigned char b : s) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return h;
}

double IdfTable::idf(const std::string& token) const {
    auto it = df.find(token);
    const std::int64_t d = it == df.end() ? 0 : it->second;
    return std::log(static_cast<double>(doc_count + 1) / static_cast<double>(d + 1)) + 1.0;
}

IdfTable fit_idf(const std::vector<Chunk>& chunks) {
    if (chunks.empty()) {
        throw EmptyCorpusError("fit_idf: no chunks");
    }
    IdfTable table;
    table.doc_count = static_cast<std::int64_t>(chunks.size());
    for (const Chunk& c : chunks) {
        std::unordered_map<std::string, bool> seen;
        for (const std::string& t : token_texts(c.text)) {
            if (!seen.emplace(t, true).second) continue;
            ++table.df[t];
        }
    }
    return table;
}

HashedTfidfEmbedder::HashedTfidfEmbedder(int dim, IdfTable idf, std::uint64_t seed)
    : dim_(dim), idf_(std::move(idf)), seed_(seed) {
    if (dim_ <= 0) {
        throw Error("HashedTfidfEmbedder: dim must be positive, got " +
                    std::to_string(dim_));
    }
}

std::vector<EmbeddingVector> HashedTfidfEmbedder::embed_texts(
    const std::vector<std::string>& texts) const {
    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const std::string& text : texts) {
        std::unordered_map<std::string, std::int64_t> tf;
        for (const std::string& t : token_texts(text)) ++tf[t];

        EmbeddingVector v;
        v.dim = dim_;
        v.values.assign(static_cast<size_t>(dim_), 0.0);
        for (const auto& [token, count] : tf) {
            const size_t bucket = fnv1a64(token, seed_) % static_cast<std::uint64_t>(dim_);
            v.values[bucket] += static_cast<double>(count) * idf_.idf(token);
        }
        out.push_back(l2_normalized(std::move(v)));
    }
    return out;
}

void HashedTfidfEmbedder::save(const std::string& path) const {
    nlohmann::json df = nlohmann::json::object();
    for (const auto& [token, count] : idf_.df) df[token] = count;
    nlohmann::json j{
        {"magic", "PRAG1"},
        {"kind", "hashed_tfidf_embedder"},
        {"dim", dim_},
        {"seed", seed_},
        {"doc_count", idf_.doc_count},
        {"df", std::move(df)},
    };
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path);
    out << j.dump(2) << '\n';
}

HashedTfidfEmbedder HashedTfidfEmbedder::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(0, std::string("invalid embedder file: ") + e.what());
    }
    if (!j.contains("magic") || j["magic"] != "PRAG1") {
        throw ParseError(0, "embedder file missing PRAG1 magic");
    }
    IdfTable idf;
    idf.doc_count = j.at("doc_count").get<std::int64_t>();
    for (const auto& [token, count] : j.at("df").items()) {
        idf.df[token] = count.get<std::int64_t>();
    }
    return HashedTfidfEmbedder(j.at("dim").get<int>(), std::move(idf),
                               j.at("seed").get<std::uint64_t>());
}

}  // namespace prag
