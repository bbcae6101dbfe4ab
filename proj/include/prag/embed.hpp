#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prag/corpus.hpp"

namespace prag {

struct EmbeddingVector {
    int dim = 0;
    std::vector<double> values;
    bool normalized = false;

    bool is_zero() const;
};

// Scales a vector to unit L2 norm and sets the normalized flag. The zero
// vector is returned unchanged with normalized=false.
EmbeddingVector l2_normalized(EmbeddingVector v);

// u.v / (|u||v|), clamped to [-1, 1]. Throws DimensionMismatch / ZeroVector.
double cosine(const EmbeddingVector& u, const EmbeddingVector& v);

// FNV-1a over the bytes of `s`, with the seed folded into the offset basis.
std::uint64_t fnv1a64(std::string_view s, std::uint64_t seed = 0);

struct IdfTable {
    std::int64_t doc_count = 0;
    std::unordered_map<std::string, std::int64_t> df;

    // ln((doc_count + 1) / (df + 1)) + 1; unseen tokens get df = 0.
    double idf(const std::string& token) const;
};

// df counts the number of distinct chunks containing each token.
IdfTable fit_idf(const std::vector<Chunk>& chunks);

class Embedder {
  public:
    virtual ~Embedder() = default;

    // One vector per input text, all sharing one dimension.
    virtual std::vector<EmbeddingVector> embed_texts(
        const std::vector<std::string>& texts) const = 0;

    EmbeddingVector embed_one(const std::string& text) const {
        return embed_texts({text}).front();
    }
};

inline constexpr int kDefaultEmbeddingDim = 256;
inline constexpr std::uint64_t kDefaultHashSeed = 0;

// Deterministic reference embedder: token t contributes tf(t) * idf(t) to
// bucket fnv1a64(t, seed) % dim, then the vector is L2-normalized. A text
// with no tokens embeds to the zero vector (normalized=false).
class HashedTfidfEmbedder : public Embedder {
  public:
    HashedTfidfEmbedder(int dim, IdfTable idf, std::uint64_t seed = kDefaultHashSeed);

    std::vector<EmbeddingVector> embed_texts(
        const std::vector<std::string>& texts) const override;

    int dim() const { return dim_; }
    std::uint64_t seed() const { return seed_; }
    const IdfTable& idf_table() const { return idf_; }

    void save(const std::string& path) const;
    static HashedTfidfEmbedder load(const std::string& path);

  private:
    int dim_;
    IdfTable idf_;
    std::uint64_t seed_;
};

}  // namespace prag
