#pragma once

#include <string>
#include <vector>

#include "prag/corpus.hpp"

namespace prag {

enum class GeneratorBackend { extractive_reference, remote };

std::string to_string(GeneratorBackend backend);
GeneratorBackend generator_backend_from_string(const std::string& s);

struct GeneratorConfig {
    GeneratorBackend backend = GeneratorBackend::extractive_reference;
    std::string endpoint;            // remote backend only
    double timeout_seconds = 10.0;   // must be > 0
    int max_answer_chars = 4096;     // codepoints; answers are cut, never split mid-codepoint

    void validate() const;
};

// Transport-level generator; the HTTP client in remote.hpp implements this.
class GenerateClient {
  public:
    virtual ~GenerateClient() = default;
    virtual std::string generate(const std::string& prompt) = 0;
};

// Splits text into sentences on '.', '?', '!', '\n', U+061F (؟) and
// U+061B (؛); sentences are trimmed, delimiters dropped, empties skipped.
std::vector<std::string> split_sentences(const std::string& text);

// remote: returns the service text, trimmed and truncated. extractive
// reference: returns the retrieved sentence with the highest token-overlap
// F1 against the query; ties go to the earliest sentence of the
// highest-ranked chunk. Deterministic and offline.
std::string generate(const std::string& prompt, const std::vector<Chunk>& retrieved,
                     const std::string& query, const GeneratorConfig& cfg,
                     GenerateClient* client = nullptr);

}  // namespace prag
