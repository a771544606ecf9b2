#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "typerank/dataset.h"
#include "typerank/eval.h"
#include "typerank/features.h"
#include "typerank/typescore.h"

namespace typerank {

struct PipelineConfig {
  std::filesystem::path types;
  std::filesystem::path entities;
  std::filesystem::path entity_types;
  std::filesystem::path queries;
  std::filesystem::path qrels;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::filesystem::path> groups;
  std::filesystem::path out_dir;

  std::size_t k = 20;  // EC cut-off for the standalone baseline runs
  int folds = 5;
  std::uint64_t seed = 42;
  int trees = 1000;
  int threads = 1;
  bool closure = true;
  bool index_names = false;

  // Throws UsageError if a referenced input file does not exist.
  void validate() const;
};

// A stage failure: which stage, and the underlying cause.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& cause)
      : std::runtime_error("stage '" + stage + "' failed: " + cause), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

struct MethodResult {
  std::string method;  // "EC-BM25", "EC-LM", "TC-BM25", "TC-LM", "LTR"
  double ndcg1 = 0.0;
  double ndcg5 = 0.0;
};

struct PipelineReport {
  std::vector<MethodResult> methods;
  std::string summary;  // contents of metrics.tsv
};

// Runs index -> baseline runs -> features -> cross-validated LTR -> eval and
// writes every artifact into out_dir:
//   index.bin, run_ec_bm25.tsv, run_ec_lm.tsv, run_tc_bm25.tsv, run_tc_lm.tsv,
//   features.tsv, run_ltr.tsv, folds.tsv, model.jsonl, eval_<method>.tsv,
//   metrics.tsv
PipelineReport run_pipeline(const PipelineConfig& config);

// Candidate feature vectors for many queries, parallel over queries. Targets
// come from `judgments` (0 for unjudged types, NIL ignored) or are left
// empty when `judgments` is null.
FeatureTable extract_feature_table(const FeatureExtractor& extractor,
                                   const std::vector<QueryRecord>& queries,
                                   const std::vector<std::vector<TypeIdx>>& candidates,
                                   const TypeJudgments* judgments, int threads);

// Ranks every query with a baseline method, parallel over queries.
RunFile rank_queries(const TypeRanker& ranker, const std::vector<QueryRecord>& queries,
                     const TypeRankingParams& params, const std::string& run_name, int threads,
                     const std::map<std::string, std::vector<EntityIdx>>& relevant = {});

}  // namespace typerank
