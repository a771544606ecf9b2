#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "fixture.h"
#include "oracle.h"
#include "typerank/dataset.h"
#include "typerank/error.h"
#include "typerank/retrieval.h"
#include "typerank/text.h"

namespace typerank {
namespace {

EntityIndex index_of(const char* entities) { return EntityIndex::build(parse_entities(entities)); }

RetrievalParams lm_params() { return {RetrievalModel::kLM}; }

TEST(Index, CountsStatistics) {
  auto idx = index_of("e1\t-\tred car\ne2\t-\tred red bus\n");
  EXPECT_EQ(idx.df("red"), 2u);
  EXPECT_EQ(idx.cf("red"), 3u);
  EXPECT_EQ(idx.doc_length(*idx.find_doc("e2")), 3u);
  EXPECT_EQ(idx.df("train"), 0u);
}

TEST(Index, DegenerateCorpora) {
  auto empty = index_of("");
  EXPECT_EQ(empty.n_docs(), 0u);
  EXPECT_EQ(empty.vocabulary_size(), 0u);
  EXPECT_TRUE(retrieve_top_k("red", 10, empty).empty());

  auto blank = index_of("e1\t-\t\n");
  EXPECT_EQ(blank.n_docs(), 1u);
  EXPECT_EQ(blank.doc_length(0), 0u);
}

TEST(Index, NamesAreIndexedOnRequest) {
  auto corpus = parse_entities("e1\tBerlin\tcapital\n");
  EXPECT_EQ(EntityIndex::build(corpus).df("berlin"), 0u);
  EXPECT_EQ(EntityIndex::build(corpus, true).df("berlin"), 1u);
}

TEST(Bm25, NoSharedTermsScoresZero) {
  auto idx = index_of("e1\t-\tred car\ne2\t-\tblue bus\n");
  EXPECT_EQ(score_bm25("green", "e1", idx), 0.0);
  EXPECT_EQ(score_bm25("blue", "e1", idx), 0.0);
}

TEST(Bm25, SingleDocumentHandEvaluation) {
  // N = 1, df = 1: idf = ln(1 + 0.5/1.5) = ln(4/3); |d| = avgdl and tf = 1
  // make each term contribute exactly idf.
  auto idx = index_of("e1\t-\ta b c\n");
  EXPECT_NEAR(score_bm25("a b c", "e1", idx), 0.8630462173553426, 1e-12);
}

TEST(Bm25, DuplicatedQueryTermDoesNotDecreaseScore) {
  auto idx = index_of("e1\t-\tred car\ne2\t-\tblue bus red\ne3\t-\tcar\n");
  EXPECT_GE(score_bm25("red red car", "e1", idx), score_bm25("red car", "e1", idx));
}

TEST(Bm25, UnknownEntityIsDataError) {
  auto idx = index_of("e1\t-\tred\n");
  EXPECT_THROW(score_bm25("red", "nope", idx), DataError);
  EXPECT_THROW(score_lm("red", "nope", idx), DataError);
}

TEST(Lm, EmptyQueryAndAbsentTerms) {
  auto idx = index_of("e1\t-\ta b\ne2\t-\ta a c\n");
  EXPECT_EQ(score_lm("", "e1", idx), 1.0);
  EXPECT_EQ(score_lm("zzz", "e1", idx), 0.0);
  EXPECT_EQ(score_lm("a zzz", "e1", idx), 0.0);
}

TEST(Lm, TwoDocumentHandEvaluation) {
  // P(b|C) = 1/5: (1 + 2000/5) / (2 + 2000) = 401/2002.
  auto idx = index_of("e1\t-\ta b\ne2\t-\ta a c\n");
  EXPECT_NEAR(score_lm("b", "e1", idx), 401.0 / 2002.0, 1e-15);
  EXPECT_NEAR(score_lm("b", "e2", idx), 400.0 / 2003.0, 1e-15);
}

TEST(TopK, TiesBreakByEntityId) {
  auto idx = index_of("b\t-\tred\na\t-\tred\nc\t-\tblue\n");
  auto list = retrieve_top_k("red", 10, idx);
  ASSERT_EQ(list.size(), 2u);
  EXPECT_EQ(list[0].id, "a");
  EXPECT_EQ(list[1].id, "b");
  EXPECT_EQ(list[0].score, list[1].score);
}

TEST(TopK, KLargerThanMatchesReturnsAllMatches) {
  auto idx = index_of("e1\t-\tred\ne2\t-\tred car\ne3\t-\tbus\n");
  EXPECT_EQ(retrieve_top_k("red", 100, idx).size(), 2u);
  EXPECT_EQ(retrieve_top_k("red", 1, idx).size(), 1u);
  EXPECT_THROW(retrieve_top_k("red", 0, idx), UsageError);
}

TEST(TopK, LmRetrievesEveryDocumentWhenTermsExist) {
  auto idx = index_of("e1\t-\tred\ne2\t-\tcar\ne3\t-\t\n");
  auto list = retrieve_top_k("red", 10, idx, lm_params());
  EXPECT_EQ(list.size(), 3u);
  EXPECT_EQ(list[0].id, "e1");
  EXPECT_TRUE(retrieve_top_k("zzz", 10, idx, lm_params()).empty());
  EXPECT_TRUE(retrieve_top_k("", 10, idx, lm_params()).empty());
}

// Random small corpora against the brute-force scorer.
TEST(TopKProperty, MatchesBruteForceOnRandomCorpora) {
  std::mt19937_64 rng(11);
  const char* vocab[] = {"a", "b", "c", "d", "e", "f"};
  for (int trial = 0; trial < 40; ++trial) {
    std::string entities, types = "T\tt\t\n", assignments;
    int n = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < n; ++i) {
      std::string desc;
      int len = static_cast<int>(rng() % 6);
      for (int j = 0; j < len; ++j) desc += std::string(j ? " " : "") + vocab[rng() % 6];
      entities += "x" + std::to_string(i) + "\t-\t" + desc + "\n";
    }
    auto kb = oracle::parse_kb(types, entities, assignments);
    auto idx = index_of(entities.c_str());
    std::string query;
    int qlen = 1 + static_cast<int>(rng() % 3);
    for (int j = 0; j < qlen; ++j) query += std::string(j ? " " : "") + vocab[rng() % 6];
    for (bool use_lm : {false, true}) {
      RetrievalParams p{use_lm ? RetrievalModel::kLM : RetrievalModel::kBM25};
      auto expected = oracle::rank_entities(kb, oracle::tokens(query), use_lm);
      auto got = retrieve_top_k(query, n, idx, p);
      ASSERT_EQ(got.size(), expected.size()) << query << " / " << entities;
      for (std::size_t i = 0; i < got.size(); ++i) {
        EXPECT_EQ(got[i].id, expected[i].first);
        EXPECT_NEAR(got[i].score, expected[i].second, 1e-9);
      }
      for (const auto& id : kb.entity_ids) {
        double s = use_lm ? score_lm(query, id, idx) : score_bm25(query, id, idx);
        double o = use_lm ? oracle::lm(kb, oracle::tokens(query), id)
                          : oracle::bm25(kb, oracle::tokens(query), id);
        EXPECT_NEAR(s, o, 1e-9);
        if (use_lm) {
          EXPECT_GE(s, 0.0);
          EXPECT_LE(s, 1.0);
        }
      }
    }
  }
}

TEST(ScoreProperty, InvariantUnderQueryTermOrder) {
  auto f = testing::make_fixture();
  const auto& idx = f->index;
  for (const char* q : {"capital city of germany", "large country in europe"}) {
    auto tokens = tokenize(q);
    auto reversed = std::vector<std::string>(tokens.rbegin(), tokens.rend());
    for (EntityIdx e = 0; e < idx.n_docs(); ++e) {
      EXPECT_NEAR(idx.score_bm25(tokens, e, {}), idx.score_bm25(reversed, e, {}), 1e-12);
      EXPECT_NEAR(idx.score_lm(tokens, e, lm_params()), idx.score_lm(reversed, e, lm_params()),
                  1e-15);
    }
  }
}

TEST(IndexIo, RoundTripPreservesScores) {
  auto f = testing::make_fixture();
  auto dir = testing::scratch_dir("index_io");
  write_index(f->index, dir / "index.bin", "prov line");
  std::string prov;
  auto back = read_index(dir / "index.bin", &prov);
  EXPECT_EQ(prov, "prov line");
  EXPECT_EQ(back.n_docs(), f->index.n_docs());
  EXPECT_EQ(back.vocabulary_size(), f->index.vocabulary_size());
  for (const char* q : testing::kFixtureQueries) {
    for (auto model : {RetrievalModel::kBM25, RetrievalModel::kLM}) {
      RetrievalParams p{model};
      EXPECT_EQ(retrieve_top_k(q, 100, back, p), retrieve_top_k(q, 100, f->index, p)) << q;
    }
  }
}

TEST(IndexIo, CorruptFilesAreDataErrors) {
  auto f = testing::make_fixture();
  auto dir = testing::scratch_dir("index_corrupt");
  write_index(f->index, dir / "index.bin");
  auto bytes = read_text_file(dir / "index.bin");

  write_text_file(dir / "magic.bin", "XXXX" + bytes.substr(4));
  EXPECT_THROW(read_index(dir / "magic.bin"), DataError);

  auto version = bytes;
  version[4] = 9;
  write_text_file(dir / "version.bin", version);
  EXPECT_THROW(read_index(dir / "version.bin"), DataError);

  write_text_file(dir / "short.bin", bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(read_index(dir / "short.bin"), DataError);

  EXPECT_THROW(read_index(dir / "missing.bin"), DataError);
}

TEST(Params, Validation) {
  RetrievalParams p;
  p.k1 = 0;
  EXPECT_THROW(p.validate(), UsageError);
  p = {};
  p.b = 1.5;
  EXPECT_THROW(p.validate(), UsageError);
  EXPECT_THROW(parse_model("tfidf"), UsageError);
  EXPECT_EQ(parse_model("lm"), RetrievalModel::kLM);
}

}  // namespace
}  // namespace typerank
