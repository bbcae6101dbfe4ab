#include "prag/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "prag/errors.hpp"

#include <nlohmann/json.hpp>

namespace prag {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::string& section,
                         std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        bool known = false;
        for (const char* a : allowed) {
            if (key == a) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error("config: unknown key '" + (section.empty() ? key : section + "." + key) +
                        "'");
        }
    }
}

template <typename T>
void read_field(const json& obj, const std::string& section, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        throw Error("config: bad value for '" + section + "." + key + "'");
    }
}

std::string read_enum(const json& obj, const std::string& section, const char* key,
                      const std::string& fallback) {
    std::string value = fallback;
    read_field(obj, section, key, value);
    return value;
}

void parse_normalization(const json& obj, PipelineConfig& cfg) {
    reject_unknown_keys(obj, "normalization",
                        {"map_arabic_compat", "zwnj_policy", "digit_policy", "strip_diacritics",
                         "collapse_whitespace", "char_map_path"});
    read_field(obj, "normalization", "map_arabic_compat", cfg.normalization.map_arabic_compat);
    read_field(obj, "normalization", "strip_diacritics", cfg.normalization.strip_diacritics);
    read_field(obj, "normalization", "collapse_whitespace",
               cfg.normalization.collapse_whitespace);
    cfg.normalization.zwnj_policy = zwnj_policy_from_string(
        read_enum(obj, "normalization", "zwnj_policy", to_string(cfg.normalization.zwnj_policy)));
    cfg.normalization.digit_policy = digit_policy_from_string(read_enum(
        obj, "normalization", "digit_policy", to_string(cfg.normalization.digit_policy)));
    read_field(obj, "normalization", "char_map_path", cfg.char_map_path);
    if (!cfg.char_map_path.empty()) {
        cfg.normalization.char_map = load_char_map(cfg.char_map_path);
    }
}

void parse_sections(const json& root, PipelineConfig& cfg) {
    reject_unknown_keys(root, "",
                        {"normalization", "chunking", "bm25", "hybrid", "reranker", "generator",
                         "embedder", "prompt", "paths"});

    if (root.contains("normalization")) parse_normalization(root["normalization"], cfg);

    if (root.contains("chunking")) {
        const json& obj = root["chunking"];
        reject_unknown_keys(obj, "chunking", {"chunk_size_tokens", "overlap_tokens"});
        read_field(obj, "chunking", "chunk_size_tokens", cfg.chunking.chunk_size_tokens);
        read_field(obj, "chunking", "overlap_tokens", cfg.chunking.overlap_tokens);
    }
    if (root.contains("bm25")) {
        const json& obj = root["bm25"];
        reject_unknown_keys(obj, "bm25", {"k1", "b"});
        read_field(obj, "bm25", "k1", cfg.bm25.k1);
        read_field(obj, "bm25", "b", cfg.bm25.b);
    }
    if (root.contains("hybrid")) {
        const json& obj = root["hybrid"];
        reject_unknown_keys(obj, "hybrid",
                            {"bm25_top_k", "dense_top_k", "join_cap", "fusion", "rrf_k"});
        read_field(obj, "hybrid", "bm25_top_k", cfg.hybrid.bm25_top_k);
        read_field(obj, "hybrid", "dense_top_k", cfg.hybrid.dense_top_k);
        read_field(obj, "hybrid", "join_cap", cfg.hybrid.join_cap);
        read_field(obj, "hybrid", "rrf_k", cfg.hybrid.rrf_k);
        cfg.hybrid.fusion =
            fusion_from_string(read_enum(obj, "hybrid", "fusion", to_string(cfg.hybrid.fusion)));
    }
    if (root.contains("reranker")) {
        const json& obj = root["reranker"];
        reject_unknown_keys(obj, "reranker", {"backend", "top_n", "endpoint", "timeout_seconds"});
        read_field(obj, "reranker", "top_n", cfg.reranker.top_n);
        read_field(obj, "reranker", "endpoint", cfg.reranker_endpoint);
        read_field(obj, "reranker", "timeout_seconds", cfg.reranker_timeout_seconds);
        cfg.reranker.backend = reranker_backend_from_string(
            read_enum(obj, "reranker", "backend", to_string(cfg.reranker.backend)));
    }
    if (root.contains("generator")) {
        const json& obj = root["generator"];
        reject_unknown_keys(obj, "generator",
                            {"backend", "endpoint", "timeout_seconds", "max_answer_chars"});
        read_field(obj, "generator", "endpoint", cfg.generator.endpoint);
        read_field(obj, "generator", "timeout_seconds", cfg.generator.timeout_seconds);
        read_field(obj, "generator", "max_answer_chars", cfg.generator.max_answer_chars);
        cfg.generator.backend = generator_backend_from_string(
            read_enum(obj, "generator", "backend", to_string(cfg.generator.backend)));
    }
    if (root.contains("embedder")) {
        const json& obj = root["embedder"];
        reject_unknown_keys(obj, "embedder", {"backend", "dim", "seed", "endpoint",
                                              "timeout_seconds"});
        read_field(obj, "embedder", "dim", cfg.embedder.dim);
        read_field(obj, "embedder", "seed", cfg.embedder.seed);
        read_field(obj, "embedder", "endpoint", cfg.embedder.endpoint);
        read_field(obj, "embedder", "timeout_seconds", cfg.embedder.timeout_seconds);
        cfg.embedder.backend = embedder_backend_from_string(
            read_enum(obj, "embedder", "backend", to_string(cfg.embedder.backend)));
    }
    if (root.contains("prompt")) {
        const json& obj = root["prompt"];
        reject_unknown_keys(obj, "prompt", {"language", "instructions"});
        read_field(obj, "prompt", "instructions", cfg.prompt.instructions);
        cfg.prompt.language = prompt_language_from_string(
            read_enum(obj, "prompt", "language", to_string(cfg.prompt.language)));
    }
    if (root.contains("paths")) {
        const json& obj = root["paths"];
        reject_unknown_keys(obj, "paths",
                            {"corpus", "dataset", "chunks", "bm25_index", "vector_index",
                             "embedder"});
        read_field(obj, "paths", "corpus", cfg.paths.corpus);
        read_field(obj, "paths", "dataset", cfg.paths.dataset);
        read_field(obj, "paths", "chunks", cfg.paths.chunks);
        read_field(obj, "paths", "bm25_index", cfg.paths.bm25_index);
        read_field(obj, "paths", "vector_index", cfg.paths.vector_index);
        read_field(obj, "paths", "embedder", cfg.paths.embedder);
    }
}

// "section.key=value"; the value is parsed as JSON when possible so numbers
// and booleans come through typed, otherwise it is taken as a string.
void apply_override(json& root, const std::string& spec) {
    const size_t eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw Error("config override must look like section.key=value, got: " + spec);
    }
    const std::string key_path = spec.substr(0, eq);
    const std::string raw_value = spec.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw_value);
    } catch (const json::exception&) {
        value = raw_value;
    }

    json* node = &root;
    size_t begin = 0;
    while (true) {
        const size_t dot = key_path.find('.', begin);
        const std::string part = key_path.substr(begin, dot - begin);
        if (part.empty()) {
            throw Error("config override has an empty key segment: " + spec);
        }
        if (dot == std::string::npos) {
            (*node)[part] = std::move(value);
            return;
        }
        node = &(*node)[part];
        begin = dot + 1;
    }
}

}  // namespace

std::string to_string(EmbedderBackend backend) {
    return backend == EmbedderBackend::remote ? "remote" : "hashed_tfidf";
}

EmbedderBackend embedder_backend_from_string(const std::string& s) {
    if (s == "hashed_tfidf") return EmbedderBackend::hashed_tfidf;
    if (s == "remote") return EmbedderBackend::remote;
    throw Error("unknown embedder backend: " + s);
}

void EmbedderConfig::validate() const {
    if (dim < 1) {
        throw Error("embedder config: dim must be >= 1, got " + std::to_string(dim));
    }
    if (timeout_seconds <= 0.0) {
        throw Error("embedder config: timeout_seconds must be > 0");
    }
    if (backend == EmbedderBackend::remote && endpoint.empty()) {
        throw Error("embedder config: remote backend requires an endpoint");
    }
}

std::string PromptConfig::effective_instructions() const {
    return instructions.empty() ? default_instructions(language) : instructions;
}

void PipelineConfig::validate() const {
    if (chunking.chunk_size_tokens < 1) {
        throw InvalidChunkConfigError("chunking: chunk_size_tokens must be >= 1, got " +
                                      std::to_string(chunking.chunk_size_tokens));
    }
    if (chunking.overlap_tokens < 0 || chunking.overlap_tokens >= chunking.chunk_size_tokens) {
        throw InvalidChunkConfigError(
            "chunking: overlap_tokens must satisfy 0 <= overlap < chunk_size, got " +
            std::to_string(chunking.overlap_tokens));
    }
    if (bm25.k1 < 0.0 || bm25.b < 0.0 || bm25.b > 1.0) {
        throw Error("bm25: require k1 >= 0 and 0 <= b <= 1");
    }
    hybrid.validate();
    reranker.validate();
    if (reranker.backend == RerankerBackend::remote && reranker_endpoint.empty()) {
        throw Error("reranker config: remote backend requires an endpoint");
    }
    if (reranker_timeout_seconds <= 0.0) {
        throw Error("reranker config: timeout_seconds must be > 0");
    }
    generator.validate();
    embedder.validate();
}

PipelineConfig parse_pipeline_config(const std::string& json_text,
                                     const std::vector<std::string>& overrides) {
    json root;
    try {
        root = json_text.empty() ? json::object() : json::parse(json_text);
    } catch (const json::exception& e) {
        throw ParseError(0, std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ParseError(0, "config root must be a JSON object");
    }
    for (const std::string& spec : overrides) {
        apply_override(root, spec);
    }

    PipelineConfig cfg;
    parse_sections(root, cfg);
    cfg.validate();
    return cfg;
}

PipelineConfig load_pipeline_config(const std::string& path,
                                    const std::vector<std::string>& overrides) {
    if (path.empty()) {
        return parse_pipeline_config("", overrides);
    }
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open config file: " + path);
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_pipeline_config(buffer.str(), overrides);
}

std::string pipeline_config_to_json(const PipelineConfig& cfg) {
    json root;
    root["normalization"] = {
        {"map_arabic_compat", cfg.normalization.map_arabic_compat},
        {"zwnj_policy", to_string(cfg.normalization.zwnj_policy)},
        {"digit_policy", to_string(cfg.normalization.digit_policy)},
        {"strip_diacritics", cfg.normalization.strip_diacritics},
        {"collapse_whitespace", cfg.normalization.collapse_whitespace},
        {"char_map_path", cfg.char_map_path},
    };
    root["chunking"] = {
        {"chunk_size_tokens", cfg.chunking.chunk_size_tokens},
        {"overlap_tokens", cfg.chunking.overlap_tokens},
    };
    root["bm25"] = {{"k1", cfg.bm25.k1}, {"b", cfg.bm25.b}};
    root["hybrid"] = {
        {"bm25_top_k", cfg.hybrid.bm25_top_k},
        {"dense_top_k", cfg.hybrid.dense_top_k},
        {"join_cap", cfg.hybrid.join_cap},
        {"fusion", to_string(cfg.hybrid.fusion)},
        {"rrf_k", cfg.hybrid.rrf_k},
    };
    root["reranker"] = {
        {"backend", to_string(cfg.reranker.backend)},
        {"top_n", cfg.reranker.top_n},
        {"endpoint", cfg.reranker_endpoint},
        {"timeout_seconds", cfg.reranker_timeout_seconds},
    };
    root["generator"] = {
        {"backend", to_string(cfg.generator.backend)},
        {"endpoint", cfg.generator.endpoint},
        {"timeout_seconds", cfg.generator.timeout_seconds},
        {"max_answer_chars", cfg.generator.max_answer_chars},
    };
    root["embedder"] = {
        {"backend", to_string(cfg.embedder.backend)},
        {"dim", cfg.embedder.dim},
        {"seed", cfg.embedder.seed},
        {"endpoint", cfg.embedder.endpoint},
        {"timeout_seconds", cfg.embedder.timeout_seconds},
    };
    root["prompt"] = {
        {"language", to_string(cfg.prompt.language)},
        {"instructions", cfg.prompt.effective_instructions()},
    };
    root["paths"] = {
        {"corpus", cfg.paths.corpus},
        {"dataset", cfg.paths.dataset},
        {"chunks", cfg.paths.chunks},
        {"bm25_index", cfg.paths.bm25_index},
        {"vector_index", cfg.paths.vector_index},
        {"embedder", cfg.paths.embedder},
    };
    return root.dump(2);
}

}  // namespace prag
