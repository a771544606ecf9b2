#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "typerank/retrieval.h"

namespace typerank {

inline constexpr std::string_view kNilToken = "<NIL>";

// Graded ground truth: qid -> (type id or <NIL>) -> gain.
struct TypeJudgments {
  std::map<std::string, std::map<std::string, int>> queries;

  // Positive-gain taxonomy types of a query (NIL excluded).
  std::size_t n_main_types(const std::string& qid) const;
};

// `qid  type_id  gain` lines. Throws DataError on negative gains.
TypeJudgments parse_qrels(std::string_view text, std::string_view source = "<qrels>");
TypeJudgments load_qrels(const std::filesystem::path& path);
std::string format_qrels(const TypeJudgments& judgments,
                         const std::vector<std::string>& header_comment = {});

struct NilFilterResult {
  TypeJudgments judgments;
  std::vector<std::string> removed;  // queries whose only positive label was NIL
};

// Drops NIL entries and removes queries left without a positive gain.
// Remaining gains are not renormalized.
NilFilterResult filter_nil(const TypeJudgments& judgments);

// Ranked types per query, as stored in a run file
// `qid  type_id  rank  score  run_name`.
struct RunFile {
  std::string name;
  std::map<std::string, ScoredList> queries;
};

RunFile parse_run(std::string_view text, std::string_view source = "<run>");
RunFile load_run(const std::filesystem::path& path);
// Each list is emitted in its stored order with ranks 1..n.
std::string format_run(const RunFile& run, const std::vector<std::string>& header_comment = {});
void write_run(const RunFile& run, const std::filesystem::path& path,
               const std::vector<std::string>& header_comment = {});

enum class GainMode { kLinear, kExponential };

// DCG@k = sum_{i<=k} g(type_i) / log2(i+1) with g = gain (linear) or
// 2^gain - 1 (exponential); normalized by the DCG of the gain-sorted
// judgments. 0 when nothing is relevant. Throws UsageError for k < 1.
double ndcg_at_k(const ScoredList& ranking, const std::map<std::string, int>& gains, int k,
                 GainMode mode = GainMode::kLinear);

struct EvalRow {
  std::string grouping;  // "all", "category" or "n_types"
  std::string group;
  std::size_t n_queries = 0;
  std::vector<double> means;  // one per cut-off
};

struct EvalReport {
  std::string run_name;
  std::vector<int> cutoffs;
  std::map<std::string, std::vector<double>> per_query;  // qid -> NDCG per cut-off
  std::vector<EvalRow> rows;
  std::vector<std::string> warnings;

  const EvalRow& overall() const { return rows.front(); }
};

// Mean NDCG over every judged query with a positive gain; queries missing
// from the run count as 0. Run queries without judgments are skipped with a
// warning. Optional groups map qid -> category. Judgments should already
// be NIL-filtered.
EvalReport evaluate_run(const RunFile& run, const TypeJudgments& judgments,
                        const std::vector<int>& cutoffs,
                        const std::map<std::string, std::string>* groups = nullptr,
                        GainMode mode = GainMode::kLinear);

std::string format_report(const EvalReport& report);

std::map<std::string, std::string> load_groups(const std::filesystem::path& path);

struct TTestResult {
  std::size_t n = 0;
  double mean_diff = 0.0;
  double t = 0.0;
  double p = 1.0;
  bool degenerate = false;  // zero variance of the differences
  std::string warning;
};

// Two-tailed paired t-test. With zero variance of the differences p is 1
// when the means agree and 0 otherwise, flagged as degenerate.
// Throws UsageError for unequal lengths or fewer than two pairs.
TTestResult paired_ttest(std::span<const double> a, std::span<const double> b);

}  // namespace typerank
