#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "prag/corpus.hpp"
#include "prag/generate.hpp"
#include "prag/index.hpp"
#include "prag/prompt.hpp"
#include "prag/retrieve.hpp"
#include "prag/textnorm.hpp"

namespace prag {

enum class EmbedderBackend { hashed_tfidf, remote };

std::string to_string(EmbedderBackend backend);
EmbedderBackend embedder_backend_from_string(const std::string& s);

struct EmbedderConfig {
    EmbedderBackend backend = EmbedderBackend::hashed_tfidf;
    int dim = kDefaultEmbeddingDim;
    std::uint64_t seed = kDefaultHashSeed;
    std::string endpoint;           // remote backend only
    double timeout_seconds = 10.0;

    void validate() const;
};

struct PromptConfig {
    PromptLanguage language = PromptLanguage::fa;
    std::string instructions;  // empty -> default_instructions(language)

    std::string effective_instructions() const;
};

// Default artifact/input locations; subcommand flags take precedence.
struct PathsConfig {
    std::string corpus;
    std::string dataset;
    std::string chunks = "chunks.jsonl";
    std::string bm25_index = "bm25.json";
    std::string vector_index = "vectors.json";
    std::string embedder = "embedder.json";
};

struct PipelineConfig {
    NormalizationConfig normalization;
    std::string char_map_path;  // optional replacement for the built-in map
    ChunkingConfig chunking;
    Bm25Params bm25;
    HybridConfig hybrid;
    RerankerConfig reranker;
    std::string reranker_endpoint;
    double reranker_timeout_seconds = 10.0;
    GeneratorConfig generator;
    EmbedderConfig embedder;
    PromptConfig prompt;
    PathsConfig paths;

    void validate() const;
};

// Strict parse of the JSON configuration: any unknown key at any level is an
// error naming the key. Empty `path` yields the built-in defaults.
// `overrides` are "section.key=value" pairs applied on top of the file
// before decoding (CLI flags route through these).
PipelineConfig load_pipeline_config(const std::string& path,
                                    const std::vector<std::string>& overrides = {});

PipelineConfig parse_pipeline_config(const std::string& json_text,
                                     const std::vector<std::string>& overrides = {});

// Canonical JSON rendering of the effective configuration (echoed at CLI
// startup; stable key order so diffs are meaningful).
std::string pipeline_config_to_json(const PipelineConfig& cfg);

}  // namespace prag
