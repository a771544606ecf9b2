#include <gtest/gtest.h>

#include <cmath>

#include "oracle.h"
#include "typerank/error.h"
#include "typerank/eval.h"

namespace typerank {
namespace {

ScoredList ranking(std::initializer_list<const char*> ids) {
  ScoredList out;
  double s = static_cast<double>(ids.size());
  for (const char* id : ids) out.push_back({id, s--});
  return out;
}

TEST(Ndcg, WorkedExample) {
  // DCG = 3 + 0 + 2/log2(4) = 4; IDCG = 3 + 2/log2(3).
  std::map<std::string, int> gains{{"a", 3}, {"c", 2}};
  double v = ndcg_at_k(ranking({"a", "b", "c"}), gains, 3);
  EXPECT_NEAR(v, 4.0 / (3.0 + 2.0 / std::log2(3.0)), 1e-12);
  EXPECT_NEAR(v, 0.93856, 1e-5);
}

TEST(Ndcg, Conventions) {
  std::map<std::string, int> gains{{"a", 3}, {"b", 1}};
  EXPECT_EQ(ndcg_at_k(ranking({"a", "b"}), gains, 5), 1.0);
  EXPECT_EQ(ndcg_at_k({}, gains, 5), 0.0);
  EXPECT_EQ(ndcg_at_k(ranking({"x"}), {}, 5), 0.0);
  EXPECT_THROW(ndcg_at_k(ranking({"a"}), gains, 0), UsageError);
}

TEST(Ndcg, MatchesOracleOnHandCraftedRankings) {
  std::map<std::string, int> gains{{"a", 7}, {"b", 4}, {"c", 2}, {"d", 1}};
  std::vector<ScoredList> runs = {ranking({"d", "c", "b", "a"}), ranking({"x", "a", "y", "b"}),
                                  ranking({"b", "a"}), ranking({"c", "x", "d", "y", "a", "b"})};
  for (const auto& run : runs) {
    std::vector<int> ranked;
    for (const auto& item : run) ranked.push_back(gains.count(item.id) ? gains.at(item.id) : 0);
    for (int k : {1, 2, 3, 5, 10}) {
      EXPECT_NEAR(ndcg_at_k(run, gains, k), oracle::ndcg(ranked, {7, 4, 2, 1}, k), 1e-12);
    }
  }
}

TEST(Ndcg, ExponentialGains) {
  std::map<std::string, int> gains{{"a", 2}, {"b", 1}};
  double dcg = 1.0 + 3.0 / std::log2(3.0);
  double idcg = 3.0 + 1.0 / std::log2(3.0);
  EXPECT_NEAR(ndcg_at_k(ranking({"b", "a"}), gains, 2, GainMode::kExponential), dcg / idcg, 1e-12);
}

TEST(NdcgProperty, DependsOnlyOnOrder) {
  std::map<std::string, int> gains{{"a", 3}, {"b", 1}, {"d", 2}};
  auto run = ranking({"b", "a", "c", "d"});
  auto transformed = run;
  for (auto& item : transformed) item.score = std::exp(item.score) * 10 - 3;
  for (int k = 1; k <= 5; ++k) {
    double v = ndcg_at_k(run, gains, k);
    EXPECT_EQ(v, ndcg_at_k(transformed, gains, k));
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
}

TEST(NilFilter, Examples) {
  TypeJudgments j;
  j.queries["q1"] = {{"<NIL>", 7}};
  j.queries["q2"] = {{"<NIL>", 3}, {"City", 4}};
  j.queries["q3"] = {{"Person", 2}, {"Athlete", 5}};
  auto r = filter_nil(j);
  EXPECT_EQ(r.removed, std::vector<std::string>{"q1"});
  EXPECT_FALSE(r.judgments.queries.count("q1"));
  EXPECT_EQ(r.judgments.queries.at("q2"), (std::map<std::string, int>{{"City", 4}}));
  EXPECT_EQ(r.judgments.queries.at("q3"), j.queries.at("q3"));
  auto twice = filter_nil(r.judgments);
  EXPECT_EQ(twice.judgments.queries, r.judgments.queries);
  EXPECT_TRUE(twice.removed.empty());
}

TEST(Qrels, ParseAndFormat) {
  auto j = parse_qrels("# h\nq1\tCity\t4\nq1\t<NIL>\t3\nq2\tPerson\t7\n");
  EXPECT_EQ(j.queries.at("q1").at("City"), 4);
  EXPECT_EQ(j.n_main_types("q1"), 1u);
  EXPECT_EQ(parse_qrels(format_qrels(j)).queries, j.queries);
  EXPECT_THROW(parse_qrels("q1\tCity\t-1\n"), DataError);
  EXPECT_THROW(parse_qrels("q1\tCity\n"), DataError);
  EXPECT_THROW(parse_qrels("q1\tCity\t1\nq1\tCity\t2\n"), DataError);
}

TEST(RunFiles, ParseSortsByRankAndValidates) {
  auto run = parse_run("q1\tB\t2\t0.5\tr\nq1\tA\t1\t0.9\tr\n");
  EXPECT_EQ(run.name, "r");
  EXPECT_EQ(run.queries.at("q1").front().id, "A");
  EXPECT_EQ(parse_run(format_run(run)).queries, run.queries);
  EXPECT_THROW(parse_run("q1\tA\t1\t0.9\tr\nq1\tA\t2\t0.5\tr\n"), DataError);
  EXPECT_THROW(parse_run("q1\tA\tone\t0.9\tr\n"), DataError);
  EXPECT_THROW(parse_run("q1\tA\t1\n"), DataError);
}

TEST(Evaluate, GroupRowsEqualRecomputationOnSubsets) {
  TypeJudgments j;
  j.queries["q1"] = {{"A", 3}};
  j.queries["q2"] = {{"B", 2}, {"C", 1}};
  j.queries["q3"] = {{"A", 1}, {"D", 5}};
  RunFile run{"r", {{"q1", ranking({"B", "A"})}, {"q2", ranking({"C", "B"})},
                    {"q3", ranking({"D", "A"})}}};
  std::map<std::string, std::string> groups{{"q1", "kw"}, {"q2", "kw"}, {"q3", "nl"}};
  auto report = evaluate_run(run, j, {1, 5}, &groups);
  EXPECT_EQ(report.overall().n_queries, 3u);

  for (const auto& row : report.rows) {
    if (row.grouping != "category") continue;
    TypeJudgments sub;
    RunFile sub_run{"r", {}};
    for (const auto& [q, g] : groups) {
      if (g != row.group) continue;
      sub.queries[q] = j.queries[q];
      sub_run.queries[q] = run.queries[q];
    }
    auto alone = evaluate_run(sub_run, sub, {1, 5});
    EXPECT_EQ(row.means, alone.overall().means) << row.group;
  }
  double mean5 = 0.0;
  for (const auto& [q, v] : report.per_query) mean5 += v[1] / 3.0;
  EXPECT_NEAR(report.overall().means[1], mean5, 1e-15);
}

TEST(Evaluate, MissingQueriesScoreZeroAndUnknownQueriesWarn) {
  TypeJudgments j;
  j.queries["q1"] = {{"A", 3}};
  j.queries["q2"] = {{"B", 2}};
  RunFile run{"r", {{"q1", ranking({"A"})}, {"zz", ranking({"A"})}}};
  auto report = evaluate_run(run, j, {1});
  EXPECT_DOUBLE_EQ(report.overall().means[0], 0.5);
  EXPECT_EQ(report.per_query.at("q2")[0], 0.0);
  EXPECT_EQ(report.warnings.size(), 1u);
}

TEST(Evaluate, IdealRunScoresOne) {
  TypeJudgments j;
  j.queries["q1"] = {{"A", 3}, {"B", 1}};
  j.queries["q2"] = {{"C", 2}};
  RunFile run{"r", {{"q1", ranking({"A", "B"})}, {"q2", ranking({"C"})}}};
  auto report = evaluate_run(run, j, {1, 5});
  for (const auto& row : report.rows) {
    for (double m : row.means) EXPECT_EQ(m, 1.0);
  }
}

TEST(TTest, MatchesScriptedDistribution) {
  // Reference values from scipy.stats.ttest_rel.
  std::vector<double> a{0.62, 0.48, 0.71, 0.55, 0.80, 0.44, 0.67, 0.59, 0.73, 0.51};
  std::vector<double> b{0.58, 0.41, 0.69, 0.47, 0.72, 0.45, 0.60, 0.52, 0.70, 0.43};
  auto r = paired_ttest(a, b);
  EXPECT_EQ(r.n, 10u);
  EXPECT_NEAR(r.t, 5.356846108207214, 1e-9);
  EXPECT_NEAR(r.p, 0.00045820862915223594, 1e-6);
  EXPECT_FALSE(r.degenerate);
}

TEST(TTest, DegenerateDifferences) {
  std::vector<double> a(30), b(30);
  for (int i = 0; i < 30; ++i) {
    b[i] = 0.01 * i;
    a[i] = b[i] + 0.25;
  }
  auto shifted = paired_ttest(a, b);
  EXPECT_TRUE(shifted.degenerate);
  EXPECT_EQ(shifted.p, 0.0);
  EXPECT_FALSE(shifted.warning.empty());
  auto same = paired_ttest(b, b);
  EXPECT_TRUE(same.degenerate);
  EXPECT_EQ(same.p, 1.0);
  EXPECT_THROW(paired_ttest(std::vector<double>{1.0}, std::vector<double>{1.0}), UsageError);
  EXPECT_THROW(paired_ttest(a, std::vector<double>{1.0, 2.0}), UsageError);
}

}  // namespace
}  // namespace typerank
