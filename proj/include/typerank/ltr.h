#pragma once

#include <string>
#include <vector>

#include "typerank/dataset.h"
#include "typerank/eval.h"
#include "typerank/forest.h"

namespace typerank {

struct LtrConfig {
  ForestConfig forest;
  // Targets are gain / max_gain; 7 assessors judged every query.
  double max_gain = 7.0;
};

// Feature matrix plus normalized targets. Rows without a target are a
// DataError, since training needs labels.
struct TrainingSet {
  Matrix x;
  std::vector<double> y;
};

TrainingSet make_training_set(const FeatureTable& table, double max_gain);

ForestModel train_ltr(const FeatureTable& table, const LtrConfig& config);

// Ranks every row's type within its query by predicted score.
RunFile predict_run(const ForestModel& model, const FeatureTable& table,
                    const std::string& run_name = "ltr");

// Ground truth implied by the feature file: positive targets become gains.
TypeJudgments judgments_from_features(const FeatureTable& table);

// Partitions sorted distinct qids into k folds after a seeded shuffle; the
// query at shuffled position i lands in fold i mod k.
std::vector<std::vector<std::string>> assign_folds(std::vector<std::string> qids, int k,
                                                   std::uint64_t seed);

struct CrossValidation {
  RunFile run;
  std::vector<std::vector<std::string>> folds;
};

// Each fold's queries are ranked by a model trained on the other folds.
// Throws UsageError when there are fewer queries than folds.
CrossValidation cross_validate(const FeatureTable& table, int k, const LtrConfig& config);

struct AblationRow {
  std::size_t n_features = 0;
  std::string added;  // name of the feature added at this step
  double ndcg1 = 0.0;
  double ndcg5 = 0.0;
};

struct Ablation {
  std::vector<std::size_t> order;  // columns by decreasing importance
  std::vector<double> importance;  // of the full-feature model, per column
  std::vector<AblationRow> rows;
};

// Ranks features by importance in a model trained on everything, then
// cross-validates the top-1, top-2, ... feature subsets. The candidate
// feature count per split follows each subset's size.
Ablation feature_ablation(const FeatureTable& table, const TypeJudgments& judgments, int k,
                          const LtrConfig& config);

std::string format_ablation(const Ablation& ablation);

}  // namespace typerank
