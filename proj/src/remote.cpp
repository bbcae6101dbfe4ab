#include "prag/remote.hpp"

#include <cmath>

#include "prag/errors.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

namespace prag {

namespace {

nlohmann::json post_json(const RemoteEndpoint& endpoint, const std::string& path,
                         const nlohmann::json& request) {
    httplib::Client client(endpoint.base_url);
    const auto seconds = static_cast<time_t>(endpoint.timeout_seconds);
    const auto usec = static_cast<time_t>((endpoint.timeout_seconds - seconds) * 1e6);
    client.set_connection_timeout(seconds, usec);
    client.set_read_timeout(seconds, usec);
    client.set_write_timeout(seconds, usec);

    httplib::Result res = client.Post(path, request.dump(), "application/json");
    if (!res) {
        throw RemoteServiceError("POST " + endpoint.base_url + path + " failed: " +
                                 httplib::to_string(res.error()));
    }
    if (res->status != 200) {
        throw RemoteServiceError("POST " + endpoint.base_url + path + " returned status " +
                                 std::to_string(res->status));
    }
    try {
        return nlohmann::json::parse(res->body);
    } catch (const nlohmann::json::exception& e) {
        throw RemoteServiceError("POST " + endpoint.base_url + path +
                                 " returned invalid JSON: " + e.what());
    }
}

[[noreturn]] void malformed(const std::string& path, const std::string& what) {
    throw RemoteServiceError(path + " response malformed: " + what);
}

}  // namespace

std::vector<EmbeddingVector> RemoteEmbedder::embed_texts(
    const std::vector<std::string>& texts) const {
    const nlohmann::json response =
        post_json(endpoint_, "/embed", nlohmann::json{{"texts", texts}});

    if (!response.contains("dim") || !response["dim"].is_number_integer()) {
        malformed("/embed", "missing integer 'dim'");
    }
    if (!response.contains("vectors") || !response["vectors"].is_array()) {
        malformed("/embed", "missing array 'vectors'");
    }
    const int dim = response["dim"].get<int>();
    const auto& vectors = response["vectors"];
    if (dim < 1) malformed("/embed", "dim must be >= 1");
    if (vectors.size() != texts.size()) {
        malformed("/embed", "expected " + std::to_string(texts.size()) + " vectors, got " +
                                std::to_string(vectors.size()));
    }

    std::vector<EmbeddingVector> out;
    out.reserve(texts.size());
    for (const auto& row : vectors) {
        if (!row.is_array() || row.size() != static_cast<size_t>(dim)) {
            malformed("/embed", "vector length does not match dim");
        }
        EmbeddingVector v;
        v.dim = dim;
        v.values.reserve(row.size());
        for (const auto& x : row) {
            if (!x.is_number()) malformed("/embed", "non-numeric vector component");
            const double value = x.get<double>();
            if (!std::isfinite(value)) malformed("/embed", "non-finite vector component");
            v.values.push_back(value);
        }
        out.push_back(l2_normalized(std::move(v)));
    }
    return out;
}

std::vector<RerankEntry> RemoteRerankClient::rerank(const std::string& query,
                                                    const std::vector<std::string>& documents,
                                                    int top_n) {
    const nlohmann::json response = post_json(
        endpoint_, "/rerank",
        nlohmann::json{{"query", query}, {"documents", documents}, {"top_n", top_n}});

    if (!response.contains("results") || !response["results"].is_array()) {
        malformed("/rerank", "missing array 'results'");
    }
    std::vector<RerankEntry> out;
    out.reserve(response["results"].size());
    for (const auto& row : response["results"]) {
        if (!row.contains("index") || !row["index"].is_number_integer() ||
            !row.contains("relevance_score") || !row["relevance_score"].is_number()) {
            malformed("/rerank", "result rows need integer 'index' and numeric 'relevance_score'");
        }
        out.push_back({row["index"].get<int>(), row["relevance_score"].get<double>()});
    }
    return out;
}

std::string RemoteGenerateClient::generate(const std::string& prompt) {
    const nlohmann::json response =
        post_json(endpoint_, "/generate", nlohmann::json{{"prompt", prompt}});
    if (!response.contains("text") || !response["text"].is_string()) {
        malformed("/generate", "missing string 'text'");
    }
    return response["text"].get<std::string>();
}

}  // namespace prag
