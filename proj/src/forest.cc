#include "typerank/forest.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>

#include <nlohmann/json.hpp>

#include "typerank/dataset.h"
#include "typerank/error.h"
#include "typerank/random.h"

namespace typerank {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m;
  m.rows = rows.size();
  m.cols = rows.empty() ? 0 : rows.front().size();
  m.data.reserve(m.rows * m.cols);
  for (const auto& r : rows) {
    if (r.size() != m.cols) throw UsageError("all feature vectors must have the same width");
    m.data.insert(m.data.end(), r.begin(), r.end());
  }
  return m;
}

void ForestConfig::validate() const {
  if (n_trees < 1) throw UsageError("n_trees must be at least 1");
  if (!(max_features_fraction > 0.0 && max_features_fraction <= 1.0)) {
    throw UsageError("max_features_fraction must lie in (0, 1]");
  }
  if (min_samples_leaf < 1) throw UsageError("min_samples_leaf must be at least 1");
  if (threads < 1) throw UsageError("threads must be at least 1");
}

std::size_t ForestConfig::max_features(std::size_t n_features) const {
  auto m = static_cast<std::size_t>(std::ceil(max_features_fraction * static_cast<double>(n_features) - 1e-12));
  return std::clamp<std::size_t>(m, 1, std::max<std::size_t>(n_features, 1));
}

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(x[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left
                                                                                       : n.right);
  }
  return nodes[i].value;
}

ForestModel::ForestModel(std::size_t n_features, std::vector<RegressionTree> trees,
                         std::vector<double> feature_importance)
    : n_features_(n_features), trees_(std::move(trees)), importance_(std::move(feature_importance)) {
  if (importance_.size() != n_features_) throw DataError("importance vector has wrong width");
  for (const auto& tree : trees_) {
    if (tree.nodes.empty()) throw DataError("tree without nodes");
    auto n = static_cast<int>(tree.nodes.size());
    for (const auto& node : tree.nodes) {
      if (node.is_leaf()) continue;
      if (static_cast<std::size_t>(node.feature) >= n_features_) {
        throw DataError("split on feature " + std::to_string(node.feature) + " >= " +
                        std::to_string(n_features_));
      }
      if (node.left <= 0 || node.left >= n || node.right <= 0 || node.right >= n) {
        throw DataError("child offset out of range");
      }
    }
  }
}

double ForestModel::predict(std::span<const double> x) const {
  if (x.size() != n_features_) {
    throw UsageError("feature vector has width " + std::to_string(x.size()) + ", model expects " +
                     std::to_string(n_features_));
  }
  if (trees_.empty()) return 0.0;
  // Mean as offset from the first tree, so identical predictions average to
  // themselves exactly.
  double first = trees_.front().predict(x);
  double dev = 0.0;
  for (std::size_t i = 1; i < trees_.size(); ++i) dev += trees_[i].predict(x) - first;
  return first + dev / static_cast<double>(trees_.size());
}

namespace {

double mean_of(const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
               std::span<const double> y) {
  double first = y[idx[begin]];
  double dev = 0.0;
  for (std::size_t i = begin + 1; i < end; ++i) dev += y[idx[i]] - first;
  return first + dev / static_cast<double>(end - begin);
}

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;  // sum_l^2/n_l + sum_r^2/n_r, larger is better
};

class TreeBuilder {
 public:
  TreeBuilder(const Matrix& x, std::span<const double> y, const ForestConfig& cfg,
              std::uint64_t seed)
      : x_(x), y_(y), cfg_(cfg), rng_(seed), m_(cfg.max_features(x.cols)) {}

  RegressionTree build(std::vector<double>& importance) {
    std::vector<std::size_t> idx(x_.rows);
    if (cfg_.bootstrap) {
      for (auto& i : idx) i = uniform_index(rng_, x_.rows);
    } else {
      std::iota(idx.begin(), idx.end(), 0);
    }
    RegressionTree tree;
    struct Pending {
      int node;
      std::size_t begin, end;
    };
    tree.nodes.emplace_back();
    std::vector<Pending> stack{{0, 0, idx.size()}};
    std::vector<std::size_t> features(x_.cols);
    std::iota(features.begin(), features.end(), 0);

    while (!stack.empty()) {
      auto [node, begin, end] = stack.back();
      stack.pop_back();
      std::size_t n = end - begin;
      double value = mean_of(idx, begin, end, y_);
      tree.nodes[node].value = value;

      bool pure = true;
      for (std::size_t i = begin + 1; i < end && pure; ++i) pure = y_[idx[i]] == y_[idx[begin]];
      if (pure || n < 2 * static_cast<std::size_t>(cfg_.min_samples_leaf)) continue;

      auto split = best_split(idx, begin, end, features);
      if (!split.found) continue;

      double sum = 0.0;
      for (std::size_t i = begin; i < end; ++i) sum += y_[idx[i]] - value;
      // Decrease of the node's squared error, computed around the node mean.
      double decrease = std::max(0.0, split.gain - sum * sum / static_cast<double>(n));
      importance[static_cast<std::size_t>(split.feature)] += decrease;

      auto f = static_cast<std::size_t>(split.feature);
      auto mid = std::stable_partition(idx.begin() + static_cast<std::ptrdiff_t>(begin),
                                       idx.begin() + static_cast<std::ptrdiff_t>(end),
                                       [&](std::size_t r) { return x_.at(r, f) <= split.threshold; });
      auto split_at = static_cast<std::size_t>(mid - idx.begin());

      int left = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      int right = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      auto& parent = tree.nodes[node];
      parent.feature = split.feature;
      parent.threshold = split.threshold;
      parent.left = left;
      parent.right = right;
      stack.push_back({right, split_at, end});
      stack.push_back({left, begin, split_at});
    }
    return tree;
  }

 private:
  const Matrix& x_;
  std::span<const double> y_;
  const ForestConfig& cfg_;
  std::mt19937_64 rng_;
  std::size_t m_;
  std::vector<std::pair<double, double>> buf_;

  // Visits features in random order until m_ non-constant ones have been
  // evaluated and a valid split exists, or all features are exhausted.
  SplitChoice best_split(const std::vector<std::size_t>& idx, std::size_t begin, std::size_t end,
                         std::vector<std::size_t>& features) {
    SplitChoice best;
    const std::size_t n = end - begin;
    const auto leaf = static_cast<std::size_t>(cfg_.min_samples_leaf);
    double mean = mean_of(idx, begin, end, y_);
    std::size_t evaluated = 0;
    for (std::size_t k = 0; k < features.size(); ++k) {
      if (evaluated >= m_ && best.found) break;
      std::size_t pick = k + uniform_index(rng_, features.size() - k);
      std::swap(features[k], features[pick]);
      std::size_t f = features[k];

      buf_.clear();
      for (std::size_t i = begin; i < end; ++i) {
        buf_.emplace_back(x_.at(idx[i], f), y_[idx[i]] - mean);
      }
      std::sort(buf_.begin(), buf_.end());
      if (buf_.front().first == buf_.back().first) continue;
      ++evaluated;

      double total = 0.0;
      for (const auto& p : buf_) total += p.second;
      double left_sum = 0.0;
      for (std::size_t i = 1; i < n; ++i) {
        left_sum += buf_[i - 1].second;
        if (buf_[i - 1].first == buf_[i].first) continue;
        if (i < leaf || n - i < leaf) continue;
        double right_sum = total - left_sum;
        double gain = left_sum * left_sum / static_cast<double>(i) +
                      right_sum * right_sum / static_cast<double>(n - i);
        if (!best.found || gain > best.gain) {
          double lo = buf_[i - 1].first;
          double hi = buf_[i].first;
          double threshold = lo + (hi - lo) / 2.0;
          if (!(threshold >= lo && threshold < hi)) threshold = lo;
          best = {true, static_cast<int>(f), threshold, gain};
        }
      }
    }
    return best;
  }
};

}  // namespace

ForestModel train_forest(const Matrix& x, std::span<const double> y, const ForestConfig& config) {
  config.validate();
  if (x.rows == 0) throw UsageError("empty training set");
  if (y.size() != x.rows) throw UsageError("one target per training row expected");
  if (x.cols == 0) throw UsageError("training rows have no features");

  const auto n_trees = static_cast<std::size_t>(config.n_trees);
  std::vector<RegressionTree> trees(n_trees);
  std::vector<std::vector<double>> tree_importance(n_trees, std::vector<double>(x.cols, 0.0));

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n_trees; i = next++) {
      TreeBuilder builder(x, y, config, splitmix64(config.seed + i));
      trees[i] = builder.build(tree_importance[i]);
    }
  };
  auto n_threads = std::min<std::size_t>(static_cast<std::size_t>(config.threads), n_trees);
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  }

  // Per-tree normalization, then the forest average, then renormalize.
  std::vector<double> importance(x.cols, 0.0);
  for (const auto& imp : tree_importance) {
    double total = std::accumulate(imp.begin(), imp.end(), 0.0);
    if (total <= 0.0) continue;
    for (std::size_t f = 0; f < x.cols; ++f) importance[f] += imp[f] / total;
  }
  double total = std::accumulate(importance.begin(), importance.end(), 0.0);
  if (total > 0.0) {
    for (auto& v : importance) v /= total;
  }
  return ForestModel(x.cols, std::move(trees), std::move(importance));
}

std::string format_forest(const ForestModel& model, std::string_view provenance) {
  nlohmann::json header = {{"format", "typerank-forest"},
                           {"version", 1},
                           {"n_features", model.n_features()},
                           {"n_trees", model.trees().size()},
                           {"feature_importance", model.feature_importance()},
                           {"provenance", std::string(provenance)}};
  std::string out = header.dump() + "\n";
  for (std::size_t i = 0; i < model.trees().size(); ++i) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : model.trees()[i].nodes) {
      nodes.push_back({n.feature, n.threshold, n.left, n.right, n.value});
    }
    out += nlohmann::json{{"tree", i}, {"nodes", std::move(nodes)}}.dump() + "\n";
  }
  return out;
}

ForestModel parse_forest(std::string_view text, std::string* provenance) {
  std::vector<RegressionTree> trees;
  std::size_t n_features = 0;
  std::size_t n_trees = 0;
  std::vector<double> importance;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  try {
    while (pos < text.size()) {
      auto nl = text.find('\n', pos);
      auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
      pos = nl == std::string_view::npos ? text.size() : nl + 1;
      if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
      auto j = nlohmann::json::parse(line);
      if (line_no++ == 0) {
        if (j.at("format") != "typerank-forest") throw DataError("not a forest model file");
        if (j.at("version") != 1) throw DataError("unsupported model version");
        n_features = j.at("n_features").get<std::size_t>();
        n_trees = j.at("n_trees").get<std::size_t>();
        importance = j.at("feature_importance").get<std::vector<double>>();
        if (provenance) *provenance = j.value("provenance", "");
        continue;
      }
      RegressionTree tree;
      for (const auto& n : j.at("nodes")) {
        tree.nodes.push_back({n.at(0).get<int>(), n.at(1).get<double>(), n.at(2).get<int>(),
                              n.at(3).get<int>(), n.at(4).get<double>()});
      }
      trees.push_back(std::move(tree));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed model file at record " + std::to_string(line_no) + ": " + e.what());
  }
  if (line_no == 0) throw DataError("empty model file");
  if (trees.size() != n_trees) throw DataError("model file tree count mismatch");
  return ForestModel(n_features, std::move(trees), std::move(importance));
}

void write_model(const ForestModel& model, const std::filesystem::path& path,
                 std::string_view provenance) {
  write_text_file(path, format_forest(model, provenance));
}

ForestModel read_model(const std::filesystem::path& path, std::string* provenance) {
  return parse_forest(read_text_file(path), provenance);
}

}  // namespace typerank
