#pragma once

#include <string>
#include <vector>

#include "prag/embed.hpp"
#include "prag/generate.hpp"
#include "prag/retrieve.hpp"

namespace prag {

// Shared connection settings for the HTTP services. base_url carries scheme,
// host and port ("http://localhost:8089"); paths are fixed per service.
struct RemoteEndpoint {
    std::string base_url;
    double timeout_seconds = 10.0;
};

// POST /embed  {"texts": [...]}  ->  {"dim": N, "vectors": [[...], ...]}
// Vectors arrive raw and are L2-normalized locally. Any transport failure,
// non-200 status, or response shape mismatch raises RemoteServiceError.
class RemoteEmbedder : public Embedder {
  public:
    explicit RemoteEmbedder(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::vector<EmbeddingVector> embed_texts(
        const std::vector<std::string>& texts) const override;

  private:
    RemoteEndpoint endpoint_;
};

// POST /rerank  {"query": "...", "documents": [...], "top_n": N}
//           ->  {"results": [{"index": i, "relevance_score": s}, ...]}
class RemoteRerankClient : public RerankClient {
  public:
    explicit RemoteRerankClient(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::vector<RerankEntry> rerank(const std::string& query,
                                    const std::vector<std::string>& documents,
                                    int top_n) override;

  private:
    RemoteEndpoint endpoint_;
};

// POST /generate  {"prompt": "..."}  ->  {"text": "..."}
class RemoteGenerateClient : public GenerateClient {
  public:
    explicit RemoteGenerateClient(RemoteEndpoint endpoint) : endpoint_(std::move(endpoint)) {}

    std::string generate(const std::string& prompt) override;

  private:
    RemoteEndpoint endpoint_;
};

}  // namespace prag
