#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "prag/textnorm.hpp"

namespace prag {

enum class DocType { plain, table };

struct DocMetadata {
    std::optional<std::string> source_file;
    std::optional<std::string> datetime;  // ISO-8601
    DocType doc_type = DocType::plain;
};

struct RawRecord {
    std::string id;
    std::string text;
    DocMetadata metadata;
};

struct Document {
    std::string id;
    std::string text;  // normalized
    DocMetadata metadata;
};

struct Chunk {
    std::string id;  // doc_id + "#" + seq
    std::string doc_id;
    int seq = 0;
    std::string text;
    std::size_t start_token = 0;
    std::size_t end_token = 0;
    DocMetadata metadata;  // inherited from the document
    bool is_table = false;
};

struct ChunkingConfig {
    int chunk_size_tokens = 128;
    int overlap_tokens = 32;
};

// Normalizes every record's text; rejects duplicate ids and documents that
// are empty after normalization.
std::vector<Document> ingest(const std::vector<RawRecord>& records,
                             const NormalizationConfig& norm_cfg);

// Plain documents: sliding token window of chunk_size_tokens with stride
// (size - overlap); the tail window is emitted unless the previous window
// already reached the end. Chunk text is the normalized-text substring
// spanning the window's tokens, so interior spacing and punctuation survive.
// Table documents are split row-group-wise with the header line repeated in
// every chunk.
std::vector<Chunk> chunk_document(const Document& doc, const ChunkingConfig& cfg);

// Corpus files are UTF-8 JSON Lines: {"id", "text"[, "source_file",
// "datetime", "doc_type"]} per line. Unknown keys are ignored.
std::vector<RawRecord> load_corpus_jsonl(const std::string& path);

void save_chunks_jsonl(const std::string& path, const std::vector<Chunk>& chunks);
std::vector<Chunk> load_chunks_jsonl(const std::string& path);

}  // namespace prag
