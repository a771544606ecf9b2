#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace typerank {

// Row-major sample matrix.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}
  // Throws UsageError on ragged input.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }
  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

struct ForestConfig {
  int n_trees = 1000;
  // Candidate features per split: ceil(fraction * n_features).
  double max_features_fraction = 0.10;
  int min_samples_leaf = 1;
  bool bootstrap = true;
  std::uint64_t seed = 42;
  // Worker threads for tree training; results do not depend on it.
  int threads = 1;

  void validate() const;  // throws UsageError
  std::size_t max_features(std::size_t n_features) const;
};

// Split nodes send x[feature] <= threshold to `left`. Leaves have feature -1.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> x) const;
};

class ForestModel {
 public:
  ForestModel() = default;
  // Throws DataError if a split references a feature >= n_features or a
  // child offset is out of range.
  ForestModel(std::size_t n_features, std::vector<RegressionTree> trees,
              std::vector<double> feature_importance);

  std::size_t n_features() const { return n_features_; }
  const std::vector<RegressionTree>& trees() const { return trees_; }
  // Impurity-decrease importance, normalized to sum to 1 when any split exists.
  const std::vector<double>& feature_importance() const { return importance_; }

  // Mean of per-tree leaf values. Throws UsageError on width mismatch.
  double predict(std::span<const double> x) const;

 private:
  std::size_t n_features_ = 0;
  std::vector<RegressionTree> trees_;
  std::vector<double> importance_;
};

// Random forest regression with CART variance-reduction splits. Tree i draws
// from a Mersenne Twister seeded with splitmix64(seed + i), so models are
// identical across runs, platforms and thread counts.
// Throws UsageError on an empty training set or a target/row count mismatch.
ForestModel train_forest(const Matrix& x, std::span<const double> y, const ForestConfig& config);

// JSON-lines model file. Line 1 is a header object
//   {"format":"typerank-forest","version":1,"n_features":F,"n_trees":T,
//    "feature_importance":[...],"provenance":"..."}
// followed by one object per tree
//   {"tree":i,"nodes":[[feature,threshold,left,right,value],...]}
// where feature = -1 marks a leaf and left/right are node offsets.
std::string format_forest(const ForestModel& model, std::string_view provenance = "");
ForestModel parse_forest(std::string_view text, std::string* provenance = nullptr);
void write_model(const ForestModel& model, const std::filesystem::path& path,
                 std::string_view provenance = "");
ForestModel read_model(const std::filesystem::path& path, std::string* provenance = nullptr);

}  // namespace typerank
