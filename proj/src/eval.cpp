#include "prag/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "prag/errors.hpp"
#include "prag/utf8.hpp"

#include <nlohmann/json.hpp>

namespace prag {

namespace {

constexpr char32_t kZwnj = 0x200C;

std::string read_required(const nlohmann::json& j, std::size_t line, const char* field) {
    if (!j.contains(field)) {
        throw MissingFieldError(line, field);
    }
    if (!j[field].is_string()) {
        throw ParseError(line, std::string("field '") + field + "' must be a string");
    }
    return j[field].get<std::string>();
}

std::string doc_id_for(size_t position) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "p%05zu", position + 1);
    return buf;
}

// Two-row aligned table: counts line and percentages line under one header.
std::string format_table(const std::vector<std::string>& headers,
                         const std::vector<std::int64_t>& counts,
                         const std::vector<double>& percents) {
    std::vector<std::string> count_cells, pct_cells;
    for (std::int64_t c : counts) count_cells.push_back(std::to_string(c));
    for (double p : percents) {
        std::ostringstream os;
        os << std::fixed << std::setprecision(1) << p;
        pct_cells.push_back(os.str());
    }
    const std::vector<std::string> labels = {"", "count", "pct"};
    std::vector<size_t> widths(headers.size());
    for (size_t i = 0; i < headers.size(); ++i) {
        widths[i] = std::max({headers[i].size(), count_cells[i].size(), pct_cells[i].size()});
    }
    size_t label_width = 0;
    for (const std::string& l : labels) label_width = std::max(label_width, l.size());

    auto row = [&](const std::string& label, const std::vector<std::string>& cells) {
        std::ostringstream os;
        os << std::left << std::setw(static_cast<int>(label_width)) << label;
        for (size_t i = 0; i < cells.size(); ++i) {
            os << "  " << std::right << std::setw(static_cast<int>(widths[i])) << cells[i];
        }
        return os.str();
    };
    return row(labels[0], headers) + "\n" + row(labels[1], count_cells) + "\n" +
           row(labels[2], pct_cells) + "\n";
}

}  // namespace

std::vector<QAExample> load_dataset(const std::string& path,
                                    const NormalizationConfig& norm_cfg) {
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot open dataset: " + path);
    }
    std::vector<QAExample> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) {
            throw ParseError(line_no, "dataset line must be a JSON object");
        }

        QAExample ex;
        ex.paragraph = normalize_text(read_required(j, line_no, "paragraph"), norm_cfg);
        ex.question = normalize_text(read_required(j, line_no, "question"), norm_cfg);
        ex.gold_answer = normalize_text(read_required(j, line_no, "gold_answer"), norm_cfg);
        if (j.contains("question_type") && j["question_type"].is_string()) {
            ex.question_type = normalize_text(j["question_type"].get<std::string>(), norm_cfg);
        }
        if (j.contains("source_file") && j["source_file"].is_string()) {
            ex.source_file = j["source_file"].get<std::string>();
        }
        if (ex.paragraph.empty() || ex.question.empty() || ex.gold_answer.empty()) {
            throw ParseError(line_no, "paragraph, question and gold_answer must be non-empty");
        }
        out.push_back(std::move(ex));
    }
    return out;
}

double RankBucketReport::pct(std::int64_t count) const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

double GradeReport::pct(std::int64_t count) const {
    return total == 0 ? 0.0 : 100.0 * static_cast<double>(count) / static_cast<double>(total);
}

RankBucketReport eval_embedding_ranking(const std::vector<QAExample>& dataset,
                                        const Embedder& embedder, int k,
                                        std::vector<RankRecord>* records) {
    if (k < 1) {
        throw Error("eval_embedding_ranking: k must be >= 1, got " + std::to_string(k));
    }
    RankBucketReport report;
    report.total = static_cast<std::int64_t>(dataset.size());
    if (dataset.empty()) return report;

    // Deduplicate paragraphs by (already normalized) text, first come first
    // numbered. Paragraphs that embed to zero cannot enter the index, so
    // their questions can only be bucketed as missed.
    std::vector<std::string> paragraphs;
    std::unordered_map<std::string, std::string> id_by_text;
    for (const QAExample& ex : dataset) {
        if (id_by_text.emplace(ex.paragraph, doc_id_for(paragraphs.size())).second) {
            paragraphs.push_back(ex.paragraph);
        }
    }
    const std::vector<EmbeddingVector> vectors = embedder.embed_texts(paragraphs);
    VectorIndex index;
    for (size_t i = 0; i < paragraphs.size(); ++i) {
        if (vectors[i].is_zero()) continue;
        index.add(id_by_text.at(paragraphs[i]), vectors[i]);
    }

    for (const QAExample& ex : dataset) {
        const std::string& gold_id = id_by_text.at(ex.paragraph);
        int rank = 0;
        if (index.size() > 0) {
            const EmbeddingVector qv = embedder.embed_one(ex.question);
            if (!qv.is_zero()) {
                for (const ScoredChunk& hit : index.search(qv, k)) {
                    if (hit.chunk_id == gold_id) {
                        rank = hit.rank;
                        break;
                    }
                }
            }
        }
        std::string bucket;
        if (rank == 1) {
            ++report.top1;
            bucket = "top1";
        } else if (rank == 2) {
            ++report.top2;
            bucket = "top2";
        } else if (rank == 3) {
            ++report.top3;
            bucket = "top3";
        } else if (rank >= 4) {
            ++report.top4_10;
            bucket = "top4_10";
        } else {
            ++report.missed;
            bucket = "missed";
        }
        if (records) {
            records->push_back({ex.question, gold_id, rank, bucket});
        }
    }
    return report;
}

std::string to_string(GradeLabel label) {
    switch (label) {
        case GradeLabel::wrong: return "wrong";
        case GradeLabel::middle: return "middle";
        case GradeLabel::correct: return "correct";
    }
    return "wrong";
}

std::string canonical_answer_form(const std::string& text) {
    static const NormalizationConfig defaults;
    const std::string normalized = normalize_text(text, defaults);

    std::string out;
    out.reserve(normalized.size());
    bool pending_space = false;
    for (size_t i = 0; i < normalized.size();) {
        const auto d = utf8::decode(normalized, i);
        i += d.len;
        char32_t cp = d.cp;
        if (cp == kZwnj) continue;  // joiner: the two sides form one word
        if (cp >= U'A' && cp <= U'Z') cp += 32;
        if (is_word_char(cp)) {
            if (pending_space && !out.empty()) out += ' ';
            pending_space = false;
            utf8::append(out, cp);
        } else {
            pending_space = true;  // whitespace and punctuation both separate
        }
    }
    return out;
}

GradeLabel grade_answer(const std::string& predicted, const std::string& gold) {
    const std::string p = canonical_answer_form(predicted);
    const std::string g = canonical_answer_form(gold);
    if (p == g || (!g.empty() && p.find(g) != std::string::npos)) {
        return GradeLabel::correct;
    }
    if (token_overlap_f1(token_texts(p), token_texts(g)) >= 0.5) {
        return GradeLabel::middle;
    }
    return GradeLabel::wrong;
}

ParagraphCorpus paragraph_corpus(const std::vector<QAExample>& dataset,
                                 const NormalizationConfig& norm_cfg) {
    std::vector<RawRecord> records;
    ParagraphCorpus out;
    for (const QAExample& ex : dataset) {
        auto it = out.doc_id_by_paragraph.find(ex.paragraph);
        if (it != out.doc_id_by_paragraph.end()) continue;
        const std::string id = doc_id_for(records.size());
        out.doc_id_by_paragraph.emplace(ex.paragraph, id);
        records.push_back({id, ex.paragraph, {}});
    }
    out.documents = ingest(records, norm_cfg);
    return out;
}

RagHarness build_rag_harness(const std::vector<QAExample>& dataset, const PipelineConfig& cfg,
                             std::shared_ptr<Embedder> embedder,
                             std::shared_ptr<RerankClient> rerank_client,
                             std::shared_ptr<GenerateClient> generate_client) {
    if (dataset.empty()) {
        throw EmptyCorpusError("build_rag_harness: empty dataset");
    }
    ParagraphCorpus corpus = paragraph_corpus(dataset, cfg.normalization);
    std::vector<Chunk> chunks;
    for (const Document& doc : corpus.documents) {
        for (Chunk& c : chunk_document(doc, cfg.chunking)) {
            chunks.push_back(std::move(c));
        }
    }
    RagHarness harness;
    harness.doc_id_by_paragraph = std::move(corpus.doc_id_by_paragraph);
    harness.pipeline = std::make_unique<Pipeline>(std::move(chunks), cfg, std::move(embedder),
                                                  std::move(rerank_client),
                                                  std::move(generate_client));
    return harness;
}

GradeReport eval_end_to_end(const std::vector<QAExample>& dataset, const Pipeline& pipeline,
                            const std::unordered_map<std::string, std::string>& gold_doc_ids,
                            const std::string& results_path,
                            std::vector<EvalRecord>* records) {
    GradeReport report;
    report.total = static_cast<std::int64_t>(dataset.size());

    std::ofstream results;
    if (!results_path.empty()) {
        results.open(results_path);
        if (!results) {
            throw Error("cannot open results file for writing: " + results_path);
        }
    }

    for (const QAExample& ex : dataset) {
        EvalRecord record;
        record.question = ex.question;
        record.gold_answer = ex.gold_answer;

        try {
            const QueryResult result = pipeline.run(ex.question);
            record.predicted = result.answer;
            for (const ScoredChunk& hit : result.retrieved) {
                record.retrieved_ids.push_back(hit.chunk_id);
            }
            record.label = grade_answer(result.answer, ex.gold_answer);

            auto gold_it = gold_doc_ids.find(ex.paragraph);
            if (gold_it != gold_doc_ids.end()) {
                for (const ScoredChunk& hit : result.retrieved) {
                    const std::string doc_id = hit.chunk_id.substr(0, hit.chunk_id.find('#'));
                    if (doc_id == gold_it->second) {
                        record.rank_of_gold = hit.rank;
                        break;
                    }
                }
            }
        } catch (const RemoteServiceError& e) {
            record.label = GradeLabel::wrong;
            std::fprintf(stderr, "eval: remote failure, graded wrong: %s\n", e.what());
        } catch (const NoRetrievedContentError&) {
            record.label = GradeLabel::wrong;
        }

        switch (record.label) {
            case GradeLabel::wrong: ++report.wrong; break;
            case GradeLabel::middle: ++report.middle; break;
            case GradeLabel::correct: ++report.correct; break;
        }

        if (results.is_open()) {
            nlohmann::json j{
                {"question", record.question},
                {"gold_answer", record.gold_answer},
                {"predicted", record.predicted},
                {"label", to_string(record.label)},
                {"retrieved_ids", record.retrieved_ids},
                {"rank_of_gold",
                 record.rank_of_gold ? nlohmann::json(*record.rank_of_gold) : nlohmann::json()},
            };
            results << j.dump() << '\n';
        }
        if (records) records->push_back(std::move(record));
    }
    return report;
}

std::string format_report(const RankBucketReport& r) {
    return format_table(
        {"Top 1", "Top 2", "Top 3", "Top 4-10", "Missed", "Total"},
        {r.top1, r.top2, r.top3, r.top4_10, r.missed, r.total},
        {r.pct(r.top1), r.pct(r.top2), r.pct(r.top3), r.pct(r.top4_10), r.pct(r.missed),
         r.pct(r.total)});
}

std::string format_report(const GradeReport& r) {
    return format_table({"Wrong", "Middle", "Correct", "Total"},
                        {r.wrong, r.middle, r.correct, r.total},
                        {r.pct(r.wrong), r.pct(r.middle), r.pct(r.correct), r.pct(r.total)}) +
           "grading rule: correct = canonical exact match or gold contained in predicted; "
           "middle = token-overlap F1 >= 0.5; else wrong\n";
}

}  // namespace prag
