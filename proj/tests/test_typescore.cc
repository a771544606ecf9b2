#include <gtest/gtest.h>

#include "fixture.h"
#include "oracle.h"
#include "typerank/error.h"
#include "typerank/text.h"
#include "typerank/typescore.h"

namespace typerank {
namespace {

struct Built {
  KnowledgeBase kb;
  EntityIndex index;
  PseudoTypeIndex pseudo;
  std::unique_ptr<TypeRanker> ranker;
};

std::unique_ptr<Built> build(const char* types, const char* entities, const char* assignments,
                             bool closure = true) {
  auto b = std::make_unique<Built>();
  b->kb.taxonomy = parse_taxonomy(types);
  b->kb.corpus = parse_entities(entities);
  b->kb.assoc = TypeAssociations::build(b->kb.taxonomy, b->kb.corpus,
                                        parse_entity_types(assignments), closure);
  b->index = EntityIndex::build(b->kb.corpus);
  b->pseudo = PseudoTypeIndex::build(b->kb.taxonomy, b->kb.assoc, b->index);
  b->ranker = std::make_unique<TypeRanker>(b->kb, b->index, b->pseudo);
  return b;
}

TEST(EntityCentric, SingleEntityTypeGetsItsScore) {
  auto b = build("T\tt\t\nU\tu\t\n", "e1\t-\tred car\ne2\t-\tblue bus\n", "e1\tT\ne2\tU\n");
  double e1 = score_bm25("red", "e1", b->index);
  EXPECT_DOUBLE_EQ(b->ranker->score_ec("red", "T", 1, RetrievalModel::kBM25), e1);
  EXPECT_EQ(b->ranker->score_ec("red", "U", 1, RetrievalModel::kBM25), 0.0);
  EXPECT_THROW(b->ranker->score_ec("red", "Nope", 1, RetrievalModel::kBM25), DataError);
  EXPECT_THROW(b->ranker->score_ec("red", "T", 0, RetrievalModel::kBM25), UsageError);
}

TEST(EntityCentric, ThreeEntityBruteForce) {
  const char* types = "T\tt\t\nU\tu\tT\n";
  const char* ents = "e1\t-\tred car\ne2\t-\tred red bus\ne3\t-\tcar park\n";
  const char* assign = "e1\tT\ne2\tU\ne3\tU\n";
  auto b = build(types, ents, assign);
  auto kb = oracle::parse_kb(types, ents, assign);
  for (const char* q : {"red car", "bus", "park red"}) {
    for (const char* t : {"T", "U"}) {
      for (bool use_lm : {false, true}) {
        EXPECT_NEAR(b->ranker->score_ec(q, t, 3, use_lm ? RetrievalModel::kLM
                                                          : RetrievalModel::kBM25),
                    oracle::ec(kb, oracle::tokens(q), t, 3, use_lm), 1e-12);
      }
    }
  }
}

TEST(PseudoDocs, UniformWeightsAverageFrequencies) {
  auto b = build("T\tt\t\nU\tu\t\nV\tv\t\n", "e1\t-\tred car\ne2\t-\tred\ne3\t-\tred bus\n",
                 "e1\tT\ne2\tU\ne3\tU\n");
  auto t = b->kb.taxonomy.at("T"), u = b->kb.taxonomy.at("U"), v = b->kb.taxonomy.at("V");
  EXPECT_EQ(b->pseudo.freq(t, "red"), 1.0);
  EXPECT_EQ(b->pseudo.freq(t, "car"), 1.0);
  EXPECT_EQ(b->pseudo.doc(t).length, 2.0);
  EXPECT_DOUBLE_EQ(b->pseudo.freq(u, "red"), 1.0);
  EXPECT_DOUBLE_EQ(b->pseudo.freq(u, "bus"), 0.5);
  EXPECT_TRUE(b->pseudo.doc(v).term_freqs.empty());
  EXPECT_EQ(b->pseudo.n_docs(), 2u);
}

TEST(PseudoDocs, MatchBruteForceAccumulation) {
  const char* types = "A\ta\t\nB\tb\tA\nC\tc\t\n";
  const char* ents = "e1\t-\tx y\ne2\t-\ty y z\ne3\t-\tz\ne4\t-\tx x x\n";
  const char* assign = "e1\tB\ne2\tA\ne3\tC\ne4\tB\n";
  auto b = build(types, ents, assign);
  auto kb = oracle::parse_kb(types, ents, assign);
  for (const char* t : {"A", "B", "C"}) {
    for (const char* w : {"x", "y", "z"}) {
      EXPECT_NEAR(b->pseudo.freq(b->kb.taxonomy.at(t), w), oracle::pseudo_tf(kb, w, t), 1e-12);
    }
  }
}

TEST(TypeCentric, Conventions) {
  auto b = build("T\tt\t\n", "e1\t-\ta b c\n", "e1\tT\n");
  EXPECT_EQ(b->ranker->score_tc("zzz", "T", RetrievalModel::kBM25), 0.0);
  EXPECT_EQ(b->ranker->score_tc("", "T", RetrievalModel::kLM), 1.0);
  // One type holding one document: the entity-level hand evaluation.
  EXPECT_NEAR(b->ranker->score_tc("a b c", "T", RetrievalModel::kBM25), 0.8630462173553426,
              1e-12);
}

TEST(TypeCentric, FixtureMatchesBruteForce) {
  auto f = testing::make_fixture();
  auto kb = oracle::parse_kb(testing::kFixtureTypes, testing::kFixtureEntities,
                             testing::kFixtureEntityTypes);
  for (const char* q : testing::kFixtureQueries) {
    for (const auto& t : kb.types) {
      for (bool use_lm : {false, true}) {
        auto model = use_lm ? RetrievalModel::kLM : RetrievalModel::kBM25;
        EXPECT_NEAR(f->ranker->score_tc(q, t, model), oracle::tc(kb, oracle::tokens(q), t, use_lm),
                    1e-12)
            << q << " " << t;
      }
    }
  }
}

TEST(TypeCentric, DegeneratesToEntityRetrieval) {
  const char* ents = "e1\t-\tred car\ne2\t-\tred red bus\ne3\t-\tcar park lot\n";
  auto b = build("T1\tt\t\nT2\tu\t\nT3\tv\t\n", ents, "e1\tT1\ne2\tT2\ne3\tT3\n");
  for (const char* q : {"red", "car park", "bus red"}) {
    for (int i = 1; i <= 3; ++i) {
      std::string t = "T" + std::to_string(i), e = "e" + std::to_string(i);
      EXPECT_NEAR(b->ranker->score_tc(q, t, RetrievalModel::kBM25), score_bm25(q, e, b->index),
                  1e-12);
      EXPECT_NEAR(b->ranker->score_tc(q, t, RetrievalModel::kLM), score_lm(q, e, b->index),
                  1e-15);
    }
  }
}

TEST(Oracle, CountsRelevantEntitiesUnderClosure) {
  const char* types = "A\ta\t\nB\tb\tA\n";
  auto with = build(types, "e1\t-\tx\ne2\t-\ty\n", "e1\tB\ne2\tB\n");
  auto without = build(types, "e1\t-\tx\ne2\t-\ty\n", "e1\tB\ne2\tB\n", false);
  auto a = with->kb.taxonomy.at("A"), bt = with->kb.taxonomy.at("B");
  EXPECT_EQ(score_oracle(bt, {}, with->kb.assoc), 0u);
  EXPECT_EQ(score_oracle(bt, {0, 1}, with->kb.assoc), 2u);
  EXPECT_EQ(score_oracle(a, {0}, with->kb.assoc), 1u);
  EXPECT_EQ(score_oracle(a, {0}, without->kb.assoc), 0u);

  TypeRankingParams p;
  p.method = TypeMethod::kOracle;
  auto list = without->ranker->rank({}, p, {0});
  ASSERT_EQ(list.size(), 1u);
  EXPECT_EQ(list[0].id, "B");
}

TEST(Ranking, AllMethodsMatchBruteForceOverAllTypes) {
  auto f = testing::make_fixture();
  auto kb = oracle::parse_kb(testing::kFixtureTypes, testing::kFixtureEntities,
                             testing::kFixtureEntityTypes);
  for (const char* q : testing::kFixtureQueries) {
    for (auto method : {TypeMethod::kEntityCentric, TypeMethod::kTypeCentric}) {
      for (bool use_lm : {false, true}) {
        TypeRankingParams p;
        p.method = method;
        p.retrieval.model = use_lm ? RetrievalModel::kLM : RetrievalModel::kBM25;
        p.k = 5;
        auto list = f->ranker->rank(tokenize(q), p);
        std::vector<std::pair<std::string, double>> expected;
        for (const auto& t : kb.types) {
          double s = method == TypeMethod::kEntityCentric
                         ? oracle::ec(kb, oracle::tokens(q), t, 5, use_lm)
                         : oracle::tc(kb, oracle::tokens(q), t, use_lm);
          if (s > 0) expected.emplace_back(t, s);
        }
        ASSERT_EQ(list.size(), expected.size()) << q;
        for (const auto& item : list) {
          auto it = std::find_if(expected.begin(), expected.end(),
                                 [&](const auto& e) { return e.first == item.id; });
          ASSERT_NE(it, expected.end());
          EXPECT_NEAR(item.score, it->second, 1e-12);
        }
        for (std::size_t i = 1; i < list.size(); ++i) {
          EXPECT_TRUE(ranks_before(list[i - 1], list[i]));
        }
      }
    }
  }
}

TEST(EntityCentricProperty, TotalsAndLinearity) {
  // Single-typed entities, no closure, each type holding one entity.
  const char* ents = "e1\t-\tred car\ne2\t-\tred red bus\ne3\t-\tcar park\ne4\t-\tred\n";
  auto b = build("A\ta\t\nB\tb\t\nC\tc\t\nD\td\t\n", ents, "e1\tA\ne2\tB\ne3\tC\ne4\tD\n", false);
  auto q = tokenize("red car");
  RetrievalParams p;
  auto hits = b->index.top_k(q, 10, p);
  double entity_total = 0.0;
  for (const auto& h : hits) entity_total += h.score;
  auto dense = b->ranker->ec_scores(q, 10, p);
  double type_total = 0.0;
  for (double s : dense) type_total += s;
  EXPECT_NEAR(type_total, entity_total, 1e-12);

  auto doubled = hits;
  for (auto& h : doubled) h.score *= 2.0;
  auto once = aggregate_entity_scores(hits, b->kb.assoc, b->kb.taxonomy.size());
  auto twice = aggregate_entity_scores(doubled, b->kb.assoc, b->kb.taxonomy.size());
  for (std::size_t t = 0; t < once.size(); ++t) EXPECT_DOUBLE_EQ(twice[t], 2.0 * once[t]);
  EXPECT_EQ(b->ranker->to_ranked(once).front().id, b->ranker->to_ranked(twice).front().id);
}

TEST(Ranker, RejectsMismatchedIndex) {
  auto a = build("T\tt\t\n", "e1\t-\tx\n", "e1\tT\n");
  auto other = EntityIndex::build(parse_entities("z9\t-\tx\n"));
  EXPECT_ANY_THROW(TypeRanker(a->kb, other, a->pseudo));
}

}  // namespace
}  // namespace typerank
