#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "prag/config.hpp"
#include "prag/corpus.hpp"
#include "prag/errors.hpp"
#include "prag/eval.hpp"
#include "prag/pipeline.hpp"
#include "prag/remote.hpp"
#include "prag/tune.hpp"

#include <CLI/CLI.hpp>
#include <nlohmann/json.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 2;
constexpr int kExitRemoteError = 3;

struct GlobalOptions {
    std::string config_path;
    std::string out_dir = ".";
    std::vector<std::string> overrides;
};

std::string resolve(const std::string& out_dir, const std::string& path) {
    const std::filesystem::path p(path);
    if (p.is_absolute() || out_dir.empty()) return path;
    return (std::filesystem::path(out_dir) / p).string();
}

prag::PipelineConfig load_config(const GlobalOptions& global) {
    prag::PipelineConfig cfg =
        prag::load_pipeline_config(global.config_path, global.overrides);
    // The echo goes to stderr so stdout stays parseable command output.
    std::cerr << "effective config:\n" << prag::pipeline_config_to_json(cfg) << "\n";
    return cfg;
}

std::shared_ptr<prag::Embedder> make_query_embedder(const prag::PipelineConfig& cfg,
                                                    const std::string& out_dir) {
    if (cfg.embedder.backend == prag::EmbedderBackend::remote) {
        return std::make_shared<prag::RemoteEmbedder>(
            prag::RemoteEndpoint{cfg.embedder.endpoint, cfg.embedder.timeout_seconds});
    }
    return std::make_shared<prag::HashedTfidfEmbedder>(
        prag::HashedTfidfEmbedder::load(resolve(out_dir, cfg.paths.embedder)));
}

int cmd_ingest(const GlobalOptions& global, const std::string& corpus_flag) {
    const prag::PipelineConfig cfg = load_config(global);
    const std::string corpus_path = corpus_flag.empty() ? cfg.paths.corpus : corpus_flag;
    if (corpus_path.empty()) {
        throw prag::Error("ingest: no corpus file (use --corpus or paths.corpus)");
    }

    const std::vector<prag::RawRecord> records = prag::load_corpus_jsonl(corpus_path);
    const std::vector<prag::Document> documents = prag::ingest(records, cfg.normalization);
    std::vector<prag::Chunk> chunks;
    for (const prag::Document& doc : documents) {
        for (prag::Chunk& c : prag::chunk_document(doc, cfg.chunking)) {
            chunks.push_back(std::move(c));
        }
    }

    std::filesystem::create_directories(global.out_dir);
    const std::string chunks_path = resolve(global.out_dir, cfg.paths.chunks);
    prag::save_chunks_jsonl(chunks_path, chunks);
    std::cout << "ingested " << documents.size() << " documents into " << chunks.size()
              << " chunks -> " << chunks_path << "\n";
    return kExitOk;
}

int cmd_index(const GlobalOptions& global, const std::string& chunks_flag) {
    const prag::PipelineConfig cfg = load_config(global);
    const std::string chunks_path =
        chunks_flag.empty() ? resolve(global.out_dir, cfg.paths.chunks) : chunks_flag;

    const std::vector<prag::Chunk> chunks = prag::load_chunks_jsonl(chunks_path);
    if (chunks.empty()) {
        throw prag::EmptyCorpusError("index: chunk store is empty: " + chunks_path);
    }

    std::filesystem::create_directories(global.out_dir);
    const prag::Bm25Index bm25 = prag::Bm25Index::build(chunks, cfg.bm25);
    bm25.save(resolve(global.out_dir, cfg.paths.bm25_index));

    std::shared_ptr<prag::Embedder> embedder;
    if (cfg.embedder.backend == prag::EmbedderBackend::remote) {
        embedder = std::make_shared<prag::RemoteEmbedder>(
            prag::RemoteEndpoint{cfg.embedder.endpoint, cfg.embedder.timeout_seconds});
    } else {
        auto hashed = std::make_shared<prag::HashedTfidfEmbedder>(
            cfg.embedder.dim, prag::fit_idf(chunks), cfg.embedder.seed);
        hashed->save(resolve(global.out_dir, cfg.paths.embedder));
        embedder = hashed;
    }

    std::vector<std::string> texts;
    texts.reserve(chunks.size());
    for (const prag::Chunk& c : chunks) texts.push_back(c.text);
    const std::vector<prag::EmbeddingVector> vectors = embedder->embed_texts(texts);
    prag::VectorIndex index;
    std::size_t zero_vectors = 0;
    for (std::size_t i = 0; i < chunks.size(); ++i) {
        if (vectors[i].is_zero()) {
            ++zero_vectors;
            continue;
        }
        index.add(chunks[i].id, vectors[i]);
    }
    index.save(resolve(global.out_dir, cfg.paths.vector_index));

    std::cout << "indexed " << chunks.size() << " chunks (bm25: " << bm25.size()
              << " docs, dense: " << index.size() << " vectors";
    if (zero_vectors > 0) {
        std::cout << ", " << zero_vectors << " zero-vector chunks kept lexical-only";
    }
    std::cout << ")\n";
    return kExitOk;
}

void answer_one(const prag::Pipeline& pipeline, const std::string& question, bool show_prompt) {
    try {
        const prag::QueryResult result = pipeline.run(question);
        std::cout << "answer: " << result.answer << "\n";
        std::cout << "retrieved:\n";
        for (const prag::ScoredChunk& hit : result.retrieved) {
            std::printf("  %d. %s  %.6f  %s\n", hit.rank, hit.chunk_id.c_str(), hit.score,
                        prag::to_string(hit.source).c_str());
        }
        if (show_prompt) {
            std::cout << "prompt:\n" << result.prompt;
        }
    } catch (const prag::NoRetrievedContentError&) {
        std::cout << "answer: (no documents retrieved)\nretrieved:\n";
    }
}

int cmd_query(const GlobalOptions& global, const std::string& question, bool repl,
              bool show_prompt) {
    const prag::PipelineConfig cfg = load_config(global);
    const std::vector<prag::Chunk> chunks =
        prag::load_chunks_jsonl(resolve(global.out_dir, cfg.paths.chunks));
    prag::Bm25Index bm25 = prag::Bm25Index::load(resolve(global.out_dir, cfg.paths.bm25_index));
    prag::VectorIndex vectors =
        prag::VectorIndex::load(resolve(global.out_dir, cfg.paths.vector_index));
    const prag::Pipeline pipeline(chunks, cfg, std::move(bm25), std::move(vectors),
                                  make_query_embedder(cfg, global.out_dir));

    if (repl) {
        std::string line;
        while (std::getline(std::cin, line)) {
            if (line.empty()) continue;
            answer_one(pipeline, line, show_prompt);
        }
        return kExitOk;
    }
    if (question.empty()) {
        throw prag::Error("query: provide a question argument or --repl");
    }
    answer_one(pipeline, question, show_prompt);
    return kExitOk;
}

int cmd_eval_embed(const GlobalOptions& global, const std::string& dataset_flag, int k) {
    const prag::PipelineConfig cfg = load_config(global);
    const std::string dataset_path = dataset_flag.empty() ? cfg.paths.dataset : dataset_flag;
    if (dataset_path.empty()) {
        throw prag::Error("eval-embed: no dataset file (use --dataset or paths.dataset)");
    }
    const std::vector<prag::QAExample> dataset =
        prag::load_dataset(dataset_path, cfg.normalization);

    std::shared_ptr<prag::Embedder> embedder;
    if (cfg.embedder.backend == prag::EmbedderBackend::remote) {
        embedder = std::make_shared<prag::RemoteEmbedder>(
            prag::RemoteEndpoint{cfg.embedder.endpoint, cfg.embedder.timeout_seconds});
    } else {
        // Fit the IDF table on the dataset's unique paragraphs, one pseudo-
        // chunk per paragraph, mirroring how the protocol indexes them.
        const prag::ParagraphCorpus corpus = prag::paragraph_corpus(dataset, cfg.normalization);
        std::vector<prag::Chunk> pseudo;
        pseudo.reserve(corpus.documents.size());
        for (const prag::Document& doc : corpus.documents) {
            prag::Chunk c;
            c.id = doc.id;
            c.doc_id = doc.id;
            c.text = doc.text;
            pseudo.push_back(std::move(c));
        }
        embedder = std::make_shared<prag::HashedTfidfEmbedder>(
            cfg.embedder.dim, prag::fit_idf(pseudo), cfg.embedder.seed);
    }

    std::vector<prag::RankRecord> records;
    const prag::RankBucketReport report =
        prag::eval_embedding_ranking(dataset, *embedder, k, &records);

    std::filesystem::create_directories(global.out_dir);
    const std::string results_path = resolve(global.out_dir, "embed_results.jsonl");
    {
        std::ofstream out(results_path);
        if (!out) throw prag::Error("cannot open for writing: " + results_path);
        for (const prag::RankRecord& r : records) {
            const nlohmann::json j{{"question", r.question},
                                   {"paragraph_id", r.paragraph_id},
                                   {"rank", r.rank},
                                   {"bucket", r.bucket}};
            out << j.dump() << '\n';
        }
    }
    std::cout << prag::format_report(report) << "results: " << results_path << "\n";
    return kExitOk;
}

int cmd_eval_rag(const GlobalOptions& global, const std::string& dataset_flag) {
    const prag::PipelineConfig cfg = load_config(global);
    const std::string dataset_path = dataset_flag.empty() ? cfg.paths.dataset : dataset_flag;
    if (dataset_path.empty()) {
        throw prag::Error("eval-rag: no dataset file (use --dataset or paths.dataset)");
    }
    const std::vector<prag::QAExample> dataset =
        prag::load_dataset(dataset_path, cfg.normalization);

    const prag::RagHarness harness = prag::build_rag_harness(dataset, cfg);
    std::filesystem::create_directories(global.out_dir);
    const std::string results_path = resolve(global.out_dir, "rag_results.jsonl");
    const prag::GradeReport report = prag::eval_end_to_end(
        dataset, *harness.pipeline, harness.doc_id_by_paragraph, results_path);
    std::cout << prag::format_report(report) << "results: " << results_path << "\n";
    return kExitOk;
}

int cmd_sweep(const GlobalOptions& global, const std::string& space_flag,
              const std::string& dataset_flag, const std::string& objective_name) {
    const prag::PipelineConfig cfg = load_config(global);
    const std::string dataset_path = dataset_flag.empty() ? cfg.paths.dataset : dataset_flag;
    if (dataset_path.empty()) {
        throw prag::Error("sweep: no dataset file (use --dataset or paths.dataset)");
    }
    const prag::SearchSpace space = prag::load_search_space(space_flag);
    const prag::SweepObjective objective = prag::sweep_objective_from_string(objective_name);
    const std::vector<prag::QAExample> dataset =
        prag::load_dataset(dataset_path, cfg.normalization);

    std::filesystem::create_directories(global.out_dir);
    const std::string log_path = resolve(global.out_dir, "trials.jsonl");
    const std::vector<prag::TrialResult> results =
        prag::sweep(space, dataset, objective, cfg, log_path);

    std::cout << prag::format_sweep_summary(results);
    if (!results.empty() && results.front().status == prag::TrialStatus::ok) {
        const prag::TrialResult& best = results.front();
        std::printf("best: trial %d, %s = %.1f\n", best.trial_index,
                    prag::to_string(objective).c_str(), best.value);
    } else {
        std::cout << "best: none (no trial succeeded)\n";
    }
    std::cout << "trial log: " << log_path << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Persian retrieval-augmented generation pipeline"};
    app.require_subcommand(1);

    GlobalOptions global;
    app.add_option("--config", global.config_path, "JSON configuration file");
    app.add_option("--out", global.out_dir, "artifact directory (default: .)");
    app.add_option("--set", global.overrides,
                   "config override, section.key=value (repeatable)")
        ->allow_extra_args(false);

    std::string corpus_path;
    auto* ingest = app.add_subcommand("ingest", "normalize and chunk a JSONL corpus");
    ingest->fallthrough();
    ingest->add_option("--corpus", corpus_path, "corpus JSONL file");

    std::string chunks_path;
    auto* index = app.add_subcommand("index", "build BM25 and vector indices");
    index->fallthrough();
    index->add_option("--chunks", chunks_path, "chunk store file");

    std::string question;
    bool repl = false, show_prompt = false;
    auto* query = app.add_subcommand("query", "answer a question over the indexed corpus");
    query->fallthrough();
    query->add_option("question", question, "the question to answer");
    query->add_flag("--repl", repl, "read one question per line from stdin");
    query->add_flag("--show-prompt", show_prompt, "print the exact generator prompt");

    std::string embed_dataset;
    int embed_k = 10;
    auto* eval_embed = app.add_subcommand("eval-embed", "embedding-ranking bucket evaluation");
    eval_embed->fallthrough();
    eval_embed->add_option("--dataset", embed_dataset, "QA dataset JSONL file");
    eval_embed->add_option("--k", embed_k, "how many neighbours to rank (default 10)");

    std::string rag_dataset;
    auto* eval_rag = app.add_subcommand("eval-rag", "end-to-end answer grading");
    eval_rag->fallthrough();
    eval_rag->add_option("--dataset", rag_dataset, "QA dataset JSONL file");

    std::string space_path, sweep_dataset, objective = "retrieval_top1_pct";
    auto* sweep = app.add_subcommand("sweep", "hyperparameter grid sweep");
    sweep->fallthrough();
    sweep->add_option("--space", space_path, "search space JSON file")->required();
    sweep->add_option("--dataset", sweep_dataset, "QA dataset JSONL file");
    sweep->add_option("--objective", objective,
                      "retrieval_top1_pct (default) or e2e_correct_pct");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (app.got_subcommand(ingest)) return cmd_ingest(global, corpus_path);
        if (app.got_subcommand(index)) return cmd_index(global, chunks_path);
        if (app.got_subcommand(query)) return cmd_query(global, question, repl, show_prompt);
        if (app.got_subcommand(eval_embed)) return cmd_eval_embed(global, embed_dataset, embed_k);
        if (app.got_subcommand(eval_rag)) return cmd_eval_rag(global, rag_dataset);
        if (app.got_subcommand(sweep))
            return cmd_sweep(global, space_path, sweep_dataset, objective);
    } catch (const prag::RemoteServiceError& e) {
        std::cerr << "remote service error: " << e.what() << "\n";
        return kExitRemoteError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}
