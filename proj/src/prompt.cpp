#include "prag/prompt.hpp"

#include <sstream>

#include "prag/errors.hpp"

namespace prag {

namespace {

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : text) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (!current.empty()) lines.push_back(current);
    return lines;
}

std::string escape_cell(const std::string& cell) {
    std::string out;
    out.reserve(cell.size());
    for (char c : cell) {
        if (c == '|') out += '\\';
        out += c;
    }
    return out;
}

std::string pipe_row(const std::vector<std::string>& cells) {
    std::string row = "|";
    for (const std::string& cell : cells) {
        row += ' ';
        row += escape_cell(cell);
        row += " |";
    }
    return row;
}

std::string render_table(const Chunk& chunk) {
    std::vector<std::vector<std::string>> rows;
    for (const std::string& line : split_lines(chunk.text)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::string cell;
        for (char c : line) {
            if (c == '\t') {
                cells.push_back(cell);
                cell.clear();
            } else {
                cell += c;
            }
        }
        cells.push_back(cell);
        rows.push_back(std::move(cells));
    }
    if (rows.empty()) return "";

    const size_t width = rows.front().size();
    for (size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != width) {
            throw MalformedTableError("table chunk " + chunk.id + ": row " +
                                      std::to_string(i + 1) + " has " +
                                      std::to_string(rows[i].size()) + " cells, expected " +
                                      std::to_string(width));
        }
    }

    std::string out = pipe_row(rows.front());
    out += '\n';
    out += pipe_row(std::vector<std::string>(width, "---"));
    for (size_t i = 1; i < rows.size(); ++i) {
        out += '\n';
        out += pipe_row(rows[i]);
    }
    return out;
}

}  // namespace

std::string to_string(PromptLanguage language) {
    return language == PromptLanguage::en ? "en" : "fa";
}

PromptLanguage prompt_language_from_string(const std::string& s) {
    if (s == "fa") return PromptLanguage::fa;
    if (s == "en") return PromptLanguage::en;
    throw Error("unknown prompt language: " + s);
}

std::string default_instructions(PromptLanguage language) {
    if (language == PromptLanguage::en) {
        return "Answer the user query using only the retrieved information below. "
               "If the answer is not present there, say that you do not know.";
    }
    return "فقط با استفاده از اطلاعات بازیابی‌شده زیر به پرسش کاربر پاسخ بده. "
           "اگر پاسخ در اطلاعات موجود نیست، بگو نمی‌دانم.";
}

std::string render_chunk(const Chunk& chunk) {
    if (!chunk.is_table) return chunk.text;
    return render_table(chunk);
}

std::string metadata_prefix(const Chunk& chunk) {
    std::vector<std::string> parts;
    if (chunk.metadata.source_file) {
        parts.push_back("source: " + *chunk.metadata.source_file);
    }
    if (chunk.metadata.datetime) {
        parts.push_back("date: " + *chunk.metadata.datetime);
    }
    if (parts.empty()) return "";
    std::string out = "[";
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) out += " | ";
        out += parts[i];
    }
    out += ']';
    return out;
}

std::string attach_metadata(const Chunk& chunk) {
    const std::string prefix = metadata_prefix(chunk);
    const std::string body = render_chunk(chunk);
    if (prefix.empty()) return body;
    return prefix + '\n' + body;
}

std::string build_prompt(const PromptParts& parts) {
    if (parts.user_query.empty()) {
        throw Error("build_prompt: user_query must be non-empty");
    }
    std::string body;
    if (parts.chunks.empty()) {
        body = "(no documents retrieved)";
    } else {
        for (size_t i = 0; i < parts.chunks.size(); ++i) {
            if (i > 0) body += "\n\n";
            body += attach_metadata(parts.chunks[i]);
        }
    }
    std::string prompt = "### Instructions\n";
    prompt += parts.instructions;
    prompt += "\n\n### User Query\n";
    prompt += parts.user_query;
    prompt += "\n\n### Retrieved Information\n";
    prompt += body;
    prompt += "\n\n### Your Response:\n";
    return prompt;
}

}  // namespace prag
