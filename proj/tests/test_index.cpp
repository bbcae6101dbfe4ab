#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "prag/embed.hpp"
#include "prag/errors.hpp"
#include "prag/index.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace prag;

namespace {

Chunk chunk_of(const std::string& id, const std::string& text) {
    Chunk c;
    c.id = id;
    c.doc_id = id;
    c.text = text;
    return c;
}

std::vector<Chunk> random_corpus(std::mt19937& rng, int max_chunks, int vocab) {
    std::uniform_int_distribution<int> chunk_count(1, max_chunks);
    std::uniform_int_distribution<int> chunk_len(1, 30);
    std::uniform_int_distribution<int> word(0, vocab - 1);
    std::vector<Chunk> chunks;
    const int n = chunk_count(rng);
    for (int i = 0; i < n; ++i) {
        std::string text;
        const int len = chunk_len(rng);
        for (int j = 0; j < len; ++j) {
            if (j) text += ' ';
            text += "w" + std::to_string(word(rng));
        }
        chunks.push_back(chunk_of("c" + std::to_string(1000 + i), text));
    }
    return chunks;
}

std::string random_query(std::mt19937& rng, int vocab) {
    std::uniform_int_distribution<int> query_len(1, 8);
    std::uniform_int_distribution<int> word(0, vocab - 1);
    std::string q;
    const int len = query_len(rng);
    for (int j = 0; j < len; ++j) {
        if (j) q += ' ';
        q += "w" + std::to_string(word(rng));
    }
    return q;
}

void check_against_oracle(const std::vector<ScoredChunk>& got,
                          const std::vector<prag_test::OracleHit>& want) {
    REQUIRE(got.size() == want.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
        CHECK(got[i].chunk_id == want[i].id);
        CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-9));
        CHECK(got[i].rank == static_cast<int>(i) + 1);
    }
}

EmbeddingVector vec(std::vector<double> values) {
    EmbeddingVector v;
    v.dim = static_cast<int>(values.size());
    v.values = std::move(values);
    return v;
}

}  // namespace

TEST_SUITE("index") {

TEST_CASE("bm25 build statistics") {
    CHECK_THROWS_AS(Bm25Index::build({}), EmptyCorpusError);

    const auto one = Bm25Index::build({chunk_of("c1", "a b c d e")});
    CHECK(one.size() == 1);
    CHECK(one.avgdl() == doctest::Approx(5.0));

    const auto two = Bm25Index::build(
        {chunk_of("c1", "a b c d"), chunk_of("c2", "a b c d e f")});
    CHECK(two.size() == 2);
    CHECK(two.avgdl() == doctest::Approx(5.0));
}

TEST_CASE("bm25 search on the three-chunk corpus") {
    const std::vector<Chunk> chunks = {
        chunk_of("d1", "a a b"),
        chunk_of("d2", "a c"),
        chunk_of("d3", "c c"),
    };
    const auto index = Bm25Index::build(chunks);

    SUBCASE("query 'a' ranks the tf-2 chunk first, omits zero scores") {
        const auto hits = index.search("a", 10);
        REQUIRE(hits.size() == 2);
        CHECK(hits[0].chunk_id == "d1");
        CHECK(hits[1].chunk_id == "d2");
        CHECK(hits[0].score > hits[1].score);
        CHECK(hits[0].source == RetrievalSource::bm25);
        check_against_oracle(hits, prag_test::bm25_oracle(chunks, "a", 10));
    }

    SUBCASE("absent token yields an empty result") {
        CHECK(index.search("zzz", 10).empty());
    }

    SUBCASE("duplicate query terms count once") {
        const auto once = index.search("a", 10);
        const auto twice = index.search("a a a", 10);
        REQUIRE(once.size() == twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(once[i].chunk_id == twice[i].chunk_id);
            CHECK(once[i].score == twice[i].score);
        }
    }

    SUBCASE("idf matches the formula") {
        // df("a") = 2 of N = 3
        CHECK(index.idf("a") ==
              doctest::Approx(std::log((3.0 - 2.0 + 0.5) / (2.0 + 0.5) + 1.0)).epsilon(1e-12));
        // unseen term: df = 0
        CHECK(index.idf("zzz") ==
              doctest::Approx(std::log((3.0 + 0.5) / 0.5 + 1.0)).epsilon(1e-12));
    }

    SUBCASE("top_k truncates") {
        CHECK(index.search("a", 1).size() == 1);
    }
}

TEST_CASE("bm25 ties break by chunk id") {
    const auto index = Bm25Index::build({
        chunk_of("zz", "same text here"),
        chunk_of("aa", "same text here"),
    });
    const auto hits = index.search("same", 10);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].chunk_id == "aa");
    CHECK(hits[1].chunk_id == "zz");
    CHECK(hits[0].score == hits[1].score);
}

TEST_CASE("bm25 term-frequency monotonicity at fixed length") {
    // same length, increasing tf of the query term
    const auto index = Bm25Index::build({
        chunk_of("t1", "q x x x"),
        chunk_of("t2", "q q x x"),
        chunk_of("t3", "q q q x"),
    });
    const auto hits = index.search("q", 10);
    REQUIRE(hits.size() == 3);
    CHECK(hits[0].chunk_id == "t3");
    CHECK(hits[1].chunk_id == "t2");
    CHECK(hits[2].chunk_id == "t1");
    CHECK(hits[0].score > hits[1].score);
    CHECK(hits[1].score > hits[2].score);
}

TEST_CASE("bm25 matches the brute-force oracle on random corpora") {
    std::mt19937 rng(4242);
    for (int trial = 0; trial < 8; ++trial) {
        const auto chunks = random_corpus(rng, 50, 12);
        const auto index = Bm25Index::build(chunks);
        for (int q = 0; q < 5; ++q) {
            const auto query = random_query(rng, 14);  // some absent terms
            check_against_oracle(index.search(query, 10),
                                 prag_test::bm25_oracle(chunks, query, 10));
        }
    }
}

TEST_CASE("bm25 persistence round trip") {
    prag_test::TempDir dir;
    std::mt19937 rng(11);
    const auto chunks = random_corpus(rng, 30, 10);
    const auto index = Bm25Index::build(chunks);
    const auto path = dir.file("bm25.json");
    index.save(path);

    const auto loaded = Bm25Index::load(path);
    CHECK(loaded.size() == index.size());
    CHECK(loaded.avgdl() == index.avgdl());
    CHECK(loaded.params().k1 == index.params().k1);

    for (int q = 0; q < 20; ++q) {
        const auto query = random_query(rng, 12);
        const auto before = index.search(query, 10);
        const auto after = loaded.search(query, 10);
        REQUIRE(before.size() == after.size());
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(before[i].chunk_id == after[i].chunk_id);
            CHECK(before[i].score == after[i].score);  // bitwise
        }
    }

    CHECK_THROWS_AS(Bm25Index::load(dir.file("missing.json")), Error);
}

TEST_CASE("vector index add validation") {
    VectorIndex index(4);
    index.add("c1", vec({1, 0, 0, 0}));
    CHECK(index.size() == 1);
    CHECK(index.contains("c1"));
    CHECK(!index.contains("c2"));

    CHECK_THROWS_AS(index.add("c2", vec({1, 0, 0})), DimensionMismatchError);
    CHECK_THROWS_AS(index.add("c1", vec({0, 1, 0, 0})), DuplicateIdError);
    CHECK_THROWS_AS(index.add("c3", vec({0, 0, 0, 0})), ZeroVectorError);
}

TEST_CASE("vector index stores normalized copies") {
    VectorIndex index(2);
    index.add("c1", vec({3, 4}));  // not unit length on arrival
    const auto hits = index.search(vec({3, 4}), 1);
    REQUIRE(hits.size() == 1);
    CHECK(hits[0].score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hits[0].source == RetrievalSource::dense);
}

TEST_CASE("vector search basics") {
    VectorIndex index(3);
    index.add("e1", vec({1, 0, 0}));
    index.add("e2", vec({0, 1, 0}));

    const auto hits = index.search(vec({1, 0, 0}), 5);
    REQUIRE(hits.size() == 2);  // top_k larger than entry count returns all
    CHECK(hits[0].chunk_id == "e1");
    CHECK(hits[0].score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hits[0].rank == 1);
    CHECK(hits[1].rank == 2);

    SUBCASE("empty index") {
        VectorIndex empty;
        CHECK_THROWS_AS(empty.search(vec({1, 0, 0}), 1), EmptyIndexError);
    }

    SUBCASE("query dimension must match") {
        CHECK_THROWS_AS(index.search(vec({1, 0}), 1), DimensionMismatchError);
    }

    SUBCASE("zero query") {
        CHECK_THROWS_AS(index.search(vec({0, 0, 0}), 1), ZeroVectorError);
    }

    SUBCASE("cosine ties break by chunk id") {
        VectorIndex tied(2);
        tied.add("zz", vec({1, 0}));
        tied.add("aa", vec({1, 0}));
        const auto t = tied.search(vec({1, 0}), 2);
        CHECK(t[0].chunk_id == "aa");
        CHECK(t[1].chunk_id == "zz");
    }
}

TEST_CASE("vector search matches the exhaustive oracle") {
    std::mt19937 rng(999);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const int dim = 16;

    VectorIndex index(dim);
    std::vector<std::pair<std::string, std::vector<double>>> raw;
    for (int i = 0; i < 50; ++i) {
        std::vector<double> values(dim);
        for (auto& x : values) x = gauss(rng);
        const auto id = "v" + std::to_string(100 + i);
        raw.emplace_back(id, values);
        index.add(id, vec(values));
    }

    for (int q = 0; q < 10; ++q) {
        std::vector<double> query(dim);
        for (auto& x : query) x = gauss(rng);
        const auto got = index.search(vec(query), 10);
        const auto want = prag_test::cosine_scan_oracle(raw, query, 10);
        REQUIRE(got.size() == want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].chunk_id == want[i].id);
            CHECK(got[i].score == doctest::Approx(want[i].score).epsilon(1e-9));
        }
    }
}

TEST_CASE("vector index persistence round trip") {
    prag_test::TempDir dir;
    std::mt19937 rng(31337);
    std::normal_distribution<double> gauss(0.0, 1.0);
    VectorIndex index(8);
    for (int i = 0; i < 40; ++i) {
        std::vector<double> values(8);
        for (auto& x : values) x = gauss(rng);
        index.add("v" + std::to_string(i), vec(values));
    }
    const auto path = dir.file("vectors.json");
    index.save(path);

    const auto loaded = VectorIndex::load(path);
    CHECK(loaded.size() == index.size());
    CHECK(loaded.dim() == index.dim());

    for (int q = 0; q < 10; ++q) {
        std::vector<double> query(8);
        for (auto& x : query) x = gauss(rng);
        const auto before = index.search(vec(query), 6);
        const auto after = loaded.search(vec(query), 6);
        REQUIRE(before.size() == after.size());
        for (std::size_t i = 0; i < before.size(); ++i) {
            CHECK(before[i].chunk_id == after[i].chunk_id);
            CHECK(before[i].score == after[i].score);  // bitwise
        }
    }
}

TEST_CASE("retrieval source names round-trip") {
    for (auto src : {RetrievalSource::bm25, RetrievalSource::dense, RetrievalSource::joined,
                     RetrievalSource::reranked}) {
        CHECK(retrieval_source_from_string(to_string(src)) == src);
    }
    CHECK_THROWS_AS(retrieval_source_from_string("fused"), Error);
}

}  // TEST_SUITE
