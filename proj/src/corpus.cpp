#include "prag/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "prag/errors.hpp"

namespace prag {

namespace {

using nlohmann::json;

std::vector<Chunk> chunk_plain(const Document& doc, const ChunkingConfig& cfg) {
    const auto stream = tokenize(doc.text);
    const auto& toks = stream.tokens;
    std::vector<Chunk> chunks;
    if (toks.empty()) return chunks;

    const auto size = static_cast<std::size_t>(cfg.chunk_size_tokens);
    const auto stride = size - static_cast<std::size_t>(cfg.overlap_tokens);
    for (std::size_t start = 0; start < toks.size(); start += stride) {
        const std::size_t end = std::min(start + size, toks.size());
        Chunk c;
        c.doc_id = doc.id;
        c.seq = static_cast<int>(chunks.size());
        c.id = doc.id + "#" + std::to_string(c.seq);
        c.start_token = start;
        c.end_token = end;
        const std::size_t byte_start = toks[start].byte_start;
        const std::size_t byte_end = toks[end - 1].byte_end;
        c.text = doc.text.substr(byte_start, byte_end - byte_start);
        c.metadata = doc.metadata;
        chunks.push_back(std::move(c));
        if (end == toks.size()) break;
    }
    return chunks;
}

std::size_t count_tokens(std::string_view text) {
    return tokenize(text).tokens.size();
}

// Rows never split: each chunk is the header line plus as many following
// rows as fit in the token budget (always at least one).
std::vector<Chunk> chunk_table(const Document& doc, const ChunkingConfig& cfg) {
    std::vector<std::string> rows;
    {
        std::size_t pos = 0;
        while (pos <= doc.text.size()) {
            const auto nl = doc.text.find('\n', pos);
            const auto line = doc.text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                           : nl - pos);
            if (!line.empty()) rows.push_back(line);
            if (nl == std::string::npos) break;
            pos = nl + 1;
        }
    }

    std::vector<Chunk> chunks;
    const std::size_t total_tokens = count_tokens(doc.text);
    if (rows.empty()) return chunks;

    const std::string& header = rows.front();
    const std::size_t header_tokens = count_tokens(header);
    const auto budget = static_cast<std::size_t>(cfg.chunk_size_tokens);

    std::vector<std::size_t> row_tokens(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) row_tokens[i] = count_tokens(rows[i]);

    auto make_chunk = [&](std::size_t row_begin, std::size_t row_end, std::size_t tok_begin,
                          std::size_t tok_end) {
        Chunk c;
        c.doc_id = doc.id;
        c.seq = static_cast<int>(chunks.size());
        c.id = doc.id + "#" + std::to_string(c.seq);
        c.start_token = tok_begin;
        c.end_token = tok_end;
        c.text = header;
        for (std::size_t r = row_begin; r < row_end; ++r) c.text += "\n" + rows[r];
        c.metadata = doc.metadata;
        c.is_table = true;
        chunks.push_back(std::move(c));
    };

    if (rows.size() == 1) {  // header-only table
        make_chunk(1, 1, 0, total_tokens);
        return chunks;
    }

    std::size_t tok_cursor = header_tokens;
    std::size_t group_begin = 1;
    std::size_t group_tokens = header_tokens;
    std::size_t group_tok_start = 0;  // first chunk's span includes the header tokens
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const bool fits = group_begin == r || group_tokens + row_tokens[r] <= budget;
        if (!fits) {
            make_chunk(group_begin, r, group_tok_start, tok_cursor);
            group_begin = r;
            group_tokens = header_tokens;
            group_tok_start = tok_cursor;
        }
        group_tokens += row_tokens[r];
        tok_cursor += row_tokens[r];
    }
    make_chunk(group_begin, rows.size(), group_tok_start, total_tokens);
    return chunks;
}

// Tables keep their newline/tab skeleton through ingestion: each cell is
// normalized on its own, so whitespace collapsing cannot merge rows or
// columns. Empty raw lines are dropped, empty cells survive.
std::string normalize_table_text(std::string_view raw, const NormalizationConfig& cfg) {
    std::string out;
    std::size_t pos = 0;
    while (pos <= raw.size()) {
        const auto nl = raw.find('\n', pos);
        const auto line =
            raw.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        if (!line.empty()) {
            std::string rendered;
            std::size_t cell_pos = 0;
            bool first_cell = true;
            while (cell_pos <= line.size()) {
                const auto tab = line.find('\t', cell_pos);
                const auto cell = line.substr(
                    cell_pos, tab == std::string_view::npos ? std::string_view::npos
                                                            : tab - cell_pos);
                if (!first_cell) rendered += '\t';
                rendered += normalize_text(cell, cfg);
                first_cell = false;
                if (tab == std::string_view::npos) break;
                cell_pos = tab + 1;
            }
            if (!out.empty()) out += '\n';
            out += rendered;
        }
        if (nl == std::string_view::npos) break;
        pos = nl + 1;
    }
    return out;
}

DocMetadata metadata_from_json(const json& obj, std::size_t line_no) {
    DocMetadata meta;
    if (obj.contains("source_file")) meta.source_file = obj.at("source_file").get<std::string>();
    if (obj.contains("datetime")) meta.datetime = obj.at("datetime").get<std::string>();
    if (obj.contains("doc_type")) {
        const auto type = obj.at("doc_type").get<std::string>();
        if (type == "plain")
            meta.doc_type = DocType::plain;
        else if (type == "table")
            meta.doc_type = DocType::table;
        else
            throw ParseError(line_no, "unknown doc_type '" + type + "'");
    }
    return meta;
}

json metadata_to_json(const DocMetadata& meta) {
    json obj = json::object();
    if (meta.source_file) obj["source_file"] = *meta.source_file;
    if (meta.datetime) obj["datetime"] = *meta.datetime;
    if (meta.doc_type == DocType::table) obj["doc_type"] = "table";
    return obj;
}

}  // namespace

std::vector<Document> ingest(const std::vector<RawRecord>& records,
                             const NormalizationConfig& norm_cfg) {
    std::vector<Document> docs;
    docs.reserve(records.size());
    std::unordered_set<std::string> seen;
    for (const auto& rec : records) {
        if (rec.id.empty()) throw Error("ingest: record with empty id");
        if (!seen.insert(rec.id).second) {
            throw DuplicateIdError("ingest: duplicate document id: " + rec.id);
        }
        Document doc;
        doc.id = rec.id;
        doc.text = rec.metadata.doc_type == DocType::table
                       ? normalize_table_text(rec.text, norm_cfg)
                       : normalize_text(rec.text, norm_cfg);
        if (doc.text.empty()) {
            throw EmptyDocumentError("ingest: document empty after normalization: " + rec.id);
        }
        doc.metadata = rec.metadata;
        docs.push_back(std::move(doc));
    }
    return docs;
}

std::vector<Chunk> chunk_document(const Document& doc, const ChunkingConfig& cfg) {
    if (cfg.chunk_size_tokens <= 0)
        throw InvalidChunkConfigError("chunk_size_tokens must be positive");
    if (cfg.overlap_tokens < 0 || cfg.overlap_tokens >= cfg.chunk_size_tokens)
        throw InvalidChunkConfigError("overlap_tokens must satisfy 0 <= overlap < chunk size");
    if (doc.metadata.doc_type == DocType::table) return chunk_table(doc, cfg);
    return chunk_plain(doc, cfg);
}

std::vector<RawRecord> load_corpus_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open corpus file: " + path);
    std::vector<RawRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        if (!obj.is_object()) throw ParseError(line_no, "expected a JSON object");
        if (!obj.contains("id") || !obj.at("id").is_string() ||
            obj.at("id").get<std::string>().empty())
            throw MissingFieldError(line_no, "id");
        if (!obj.contains("text") || !obj.at("text").is_string())
            throw MissingFieldError(line_no, "text");
        RawRecord rec;
        rec.id = obj.at("id").get<std::string>();
        rec.text = obj.at("text").get<std::string>();
        try {
            rec.metadata = metadata_from_json(obj, line_no);
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void save_chunks_jsonl(const std::string& path, const std::vector<Chunk>& chunks) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write chunk store: " + path);
    for (const auto& c : chunks) {
        json obj;
        obj["id"] = c.id;
        obj["doc_id"] = c.doc_id;
        obj["seq"] = c.seq;
        obj["text"] = c.text;
        obj["start_token"] = c.start_token;
        obj["end_token"] = c.end_token;
        obj["is_table"] = c.is_table;
        obj["metadata"] = metadata_to_json(c.metadata);
        out << obj.dump() << "\n";
    }
}

std::vector<Chunk> load_chunks_jsonl(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open chunk store: " + path);
    std::vector<Chunk> chunks;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            const json obj = json::parse(line);
            Chunk c;
            c.id = obj.at("id").get<std::string>();
            c.doc_id = obj.at("doc_id").get<std::string>();
            c.seq = obj.at("seq").get<int>();
            c.text = obj.at("text").get<std::string>();
            c.start_token = obj.at("start_token").get<std::size_t>();
            c.end_token = obj.at("end_token").get<std::size_t>();
            c.is_table = obj.at("is_table").get<bool>();
            c.metadata = metadata_from_json(obj.at("metadata"), line_no);
            if (c.is_table) c.metadata.doc_type = DocType::table;
            chunks.push_back(std::move(c));
        } catch (const json::exception& e) {
            throw ParseError(line_no, e.what());
        }
    }
    return chunks;
}

}  // namespace prag
