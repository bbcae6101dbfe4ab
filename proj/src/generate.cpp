#include "prag/generate.hpp"

#include "prag/errors.hpp"
#include "prag/textnorm.hpp"
#include "prag/utf8.hpp"

namespace prag {

namespace {

constexpr char32_t kArabicQuestionMark = 0x061F;
constexpr char32_t kArabicSemicolon = 0x061B;

bool is_sentence_delimiter(char32_t cp) {
    return cp == U'.' || cp == U'?' || cp == U'!' || cp == U'\n' ||
           cp == kArabicQuestionMark || cp == kArabicSemicolon;
}

}  // namespace

std::string to_string(GeneratorBackend backend) {
    return backend == GeneratorBackend::remote ? "remote" : "extractive_reference";
}

GeneratorBackend generator_backend_from_string(const std::string& s) {
    if (s == "extractive_reference") return GeneratorBackend::extractive_reference;
    if (s == "remote") return GeneratorBackend::remote;
    throw Error("unknown generator backend: " + s);
}

void GeneratorConfig::validate() const {
    if (timeout_seconds <= 0.0) {
        throw Error("generator config: timeout_seconds must be > 0");
    }
    if (max_answer_chars < 1) {
        throw Error("generator config: max_answer_chars must be >= 1");
    }
    if (backend == GeneratorBackend::remote && endpoint.empty()) {
        throw Error("generator config: remote backend requires an endpoint");
    }
}

std::vector<std::string> split_sentences(const std::string& text) {
    std::vector<std::string> out;
    std::string current;
    auto flush = [&] {
        std::string sentence = trim_whitespace(current);
        current.clear();
        if (!sentence.empty()) out.push_back(std::move(sentence));
    };
    for (size_t i = 0; i < text.size();) {
        const auto d = utf8::decode(text, i);
        if (is_sentence_delimiter(d.cp)) {
            flush();
        } else {
            current.append(text, i, d.len);
        }
        i += d.len;
    }
    flush();
    return out;
}

std::string generate(const std::string& prompt, const std::vector<Chunk>& retrieved,
                     const std::string& query, const GeneratorConfig& cfg,
                     GenerateClient* client) {
    cfg.validate();
    if (prompt.empty()) {
        throw Error("generate: prompt must be non-empty");
    }

    if (cfg.backend == GeneratorBackend::remote) {
        if (client == nullptr) {
            throw Error("generate: remote backend requires a client");
        }
        const std::string text = trim_whitespace(client->generate(prompt));
        return utf8::truncate(text, static_cast<size_t>(cfg.max_answer_chars));
    }

    if (retrieved.empty()) {
        throw NoRetrievedContentError("generate: extractive backend got zero chunks");
    }
    const std::vector<std::string> query_tokens = token_texts(query);

    // Strict > keeps the earliest sentence of the highest-ranked chunk on
    // ties; -1 start guarantees some sentence wins even with zero overlap.
    std::string best;
    double best_score = -1.0;
    bool found = false;
    for (const Chunk& chunk : retrieved) {
        for (std::string& sentence : split_sentences(chunk.text)) {
            const double score = token_overlap_f1(token_texts(sentence), query_tokens);
            if (score > best_score) {
                best_score = score;
                best = std::move(sentence);
                found = true;
            }
        }
    }
    if (!found) {
        throw NoRetrievedContentError("generate: retrieved chunks contain no sentences");
    }
    return utf8::truncate(best, static_cast<size_t>(cfg.max_answer_chars));
}

}  // namespace prag
