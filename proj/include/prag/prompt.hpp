#pragma once

#include <string>
#include <vector>

#include "prag/corpus.hpp"

namespace prag {

enum class PromptLanguage { fa, en };

std::string to_string(PromptLanguage language);
PromptLanguage prompt_language_from_string(const std::string& s);

// Instruction text shipped for each scaffold language. The section headers
// themselves stay ASCII "###" markers regardless of language.
std::string default_instructions(PromptLanguage language);

struct PromptParts {
    std::string instructions;
    std::string user_query;  // must be non-empty
    std::vector<Chunk> chunks;
    PromptLanguage language = PromptLanguage::fa;
};

// Plain chunks render verbatim; table chunks (lines = rows, tabs = cells)
// render as a Markdown pipe table with a header separator row. Rows with
// inconsistent column counts raise MalformedTable.
std::string render_chunk(const Chunk& chunk);

// "[source: {source_file} | date: {datetime}]" using only the keys present;
// empty string when the chunk carries no metadata.
std::string metadata_prefix(const Chunk& chunk);

// Rendered chunk with its metadata prefix line (if any) on top.
std::string attach_metadata(const Chunk& chunk);

// Assembles the final prompt:
//   ### Instructions\n{i}\n\n### User Query\n{q}\n\n
//   ### Retrieved Information\n{body}\n\n### Your Response:\n
// where body is the attach_metadata renderings joined by blank lines, or the
// literal line "(no documents retrieved)" when chunks is empty.
std::string build_prompt(const PromptParts& parts);

}  // namespace prag
