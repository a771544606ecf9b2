#include "typerank/ltr.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "typerank/error.h"
#include "typerank/random.h"
#include "typerank/tsv.h"

namespace typerank {

TrainingSet make_training_set(const FeatureTable& table, double max_gain) {
  if (!(max_gain > 0.0)) throw UsageError("max_gain must be positive");
  TrainingSet set;
  set.x = Matrix(table.rows.size(), table.width());
  set.y.reserve(table.rows.size());
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    if (!row.target) {
      throw DataError("row (" + row.qid + ", " + row.type_id + ") has no target");
    }
    if (row.values.size() != table.width()) throw UsageError("inconsistent feature widths");
    std::copy(row.values.begin(), row.values.end(), set.x.row(i).begin());
    set.y.push_back(*row.target / max_gain);
  }
  return set;
}

ForestModel train_ltr(const FeatureTable& table, const LtrConfig& config) {
  auto set = make_training_set(table, config.max_gain);
  return train_forest(set.x, set.y, config.forest);
}

RunFile predict_run(const ForestModel& model, const FeatureTable& table,
                    const std::string& run_name) {
  RunFile run;
  run.name = run_name;
  for (const auto& row : table.rows) {
    run.queries[row.qid].push_back({row.type_id, model.predict(row.values)});
  }
  for (auto& [qid, list] : run.queries) sort_ranked(list);
  return run;
}

TypeJudgments judgments_from_features(const FeatureTable& table) {
  TypeJudgments j;
  for (const auto& row : table.rows) {
    if (row.target && *row.target > 0.0) {
      j.queries[row.qid][row.type_id] = static_cast<int>(std::lround(*row.target));
    }
  }
  return j;
}

std::vector<std::vector<std::string>> assign_folds(std::vector<std::string> qids, int k,
                                                   std::uint64_t seed) {
  std::sort(qids.begin(), qids.end());
  qids.erase(std::unique(qids.begin(), qids.end()), qids.end());
  if (k < 2) throw UsageError("cross-validation needs at least 2 folds");
  if (qids.size() < static_cast<std::size_t>(k)) {
    throw UsageError("cannot split " + std::to_string(qids.size()) + " queries into " +
                     std::to_string(k) + " folds");
  }
  std::mt19937_64 rng(splitmix64(seed));
  shuffle_in_place(qids, rng);
  std::vector<std::vector<std::string>> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < qids.size(); ++i) folds[i % folds.size()].push_back(qids[i]);
  for (auto& f : folds) std::sort(f.begin(), f.end());
  return folds;
}

CrossValidation cross_validate(const FeatureTable& table, int k, const LtrConfig& config) {
  CrossValidation cv;
  cv.folds = assign_folds(table.qids(), k, config.forest.seed);
  cv.run.name = "ltr";
  for (const auto& fold : cv.folds) {
    std::set<std::string> test(fold.begin(), fold.end());
    FeatureTable train{table.names, {}};
    FeatureTable held{table.names, {}};
    for (const auto& row : table.rows) (test.count(row.qid) ? held : train).rows.push_back(row);
    auto model = train_ltr(train, config);
    for (auto& [qid, list] : predict_run(model, held).queries) {
      cv.run.queries.emplace(qid, std::move(list));
    }
  }
  return cv;
}

Ablation feature_ablation(const FeatureTable& table, const TypeJudgments& judgments, int k,
                          const LtrConfig& config) {
  Ablation out;
  auto full = train_ltr(table, config);
  out.importance = full.feature_importance();
  out.order.resize(table.width());
  std::iota(out.order.begin(), out.order.end(), 0);
  std::stable_sort(out.order.begin(), out.order.end(), [&](std::size_t a, std::size_t b) {
    return out.importance[a] > out.importance[b];
  });

  for (std::size_t i = 1; i <= out.order.size(); ++i) {
    // Original column order, so the full subset reproduces plain cross-validation.
    std::vector<std::size_t> columns(out.order.begin(),
                                     out.order.begin() + static_cast<std::ptrdiff_t>(i));
    std::sort(columns.begin(), columns.end());
    auto cv = cross_validate(table.select(columns), k, config);
    auto report = evaluate_run(cv.run, judgments, {1, 5});
    out.rows.push_back({i, table.names[out.order[i - 1]], report.overall().means[0],
                        report.overall().means[1]});
  }
  return out;
}

std::string format_ablation(const Ablation& ablation) {
  std::ostringstream out;
  out << "n_features\tadded\timportance\tndcg@1\tndcg@5\n";
  for (const auto& row : ablation.rows) {
    out << row.n_features << "\t" << row.added << "\t"
        << format_double(ablation.importance[ablation.order[row.n_features - 1]]) << "\t"
        << format_double(row.ndcg1) << "\t" << format_double(row.ndcg5) << "\n";
  }
  return out.str();
}

}  // namespace typerank
