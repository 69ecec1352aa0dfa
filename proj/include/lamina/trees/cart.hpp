#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lamina/matrix.hpp"

namespace lamina::trees {

enum class TreeTask { Regression, Classification };

struct CartConfig {
  TreeTask task = TreeTask::Regression;
  int max_depth = 11;
  std::size_t min_samples_split = 2;
  /// Classification only; labels must lie in [0, n_classes).
  std::size_t n_classes = 0;
};

/// Flat node: a split when feature >= 0, otherwise a leaf.
struct TreeNode {
  int feature = -1;
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  int depth = 0;
  std::size_t samples = 0;
  /// Leaf statistic: {mean} for regression, class frequencies for
  /// classification. Internal nodes keep theirs too.
  std::vector<double> value;

  bool is_leaf() const noexcept { return feature < 0; }
};

/// Per-feature sample orderings, shared by every tree fitted on the same
/// data (one per output of a multi-output regressor).
struct PresortedFeatures {
  std::vector<std::vector<std::uint32_t>> order;  // order[f] sorts samples by feature f
  std::vector<bool> constant;                      // feature has a single value

  static PresortedFeatures build(const Matrix& data);
};

/// Impurity-reduction score used to rank candidate splits (larger is better).
/// Regression: sL²/nL + sR²/nR from target sums. Classification: Σₖ cL,ₖ²/nL +
/// Σₖ cR,ₖ²/nR from class counts. Maximizing it minimizes the weighted child
/// variance or Gini impurity.
double regression_split_score(double sum_left, double n_left, double sum_right, double n_right);
double gini_split_score(double sq_counts_left, double n_left, double sq_counts_right, double n_right);

/// True when `candidate` beats `best` by more than the tie tolerance. Earlier
/// candidates (lower feature, then lower threshold) win ties.
bool split_improves(double candidate, double best);

/// Greedy CART. Thresholds are midpoints between consecutive distinct values;
/// a sample goes left when x[f] <= threshold. Growth stops at max_depth, pure
/// nodes, nodes smaller than min_samples_split, or nodes with no distinct
/// values left. A split is taken even when it does not lower the impurity.
class CartTree {
 public:
  static CartTree fit(const Matrix& data, std::span<const double> targets, const CartConfig& config);
  static CartTree fit(const Matrix& data, std::span<const double> targets, const CartConfig& config,
                      const PresortedFeatures& presorted);

  /// Regression: leaf mean. Classification: majority class (lowest index on ties).
  double predict_row(std::span<const double> row) const;
  const TreeNode& leaf_for(std::span<const double> row) const;
  /// [n, 1] predictions.
  Matrix predict(const Matrix& data) const;

  const std::vector<TreeNode>& nodes() const noexcept { return nodes_; }
  const TreeNode& root() const { return nodes_.front(); }
  int depth() const noexcept;
  std::size_t leaf_count() const noexcept;
  const CartConfig& config() const noexcept { return config_; }

 private:
  CartConfig config_;
  std::vector<TreeNode> nodes_;
};

/// One regression tree per target column, all fitted on shared presorted data.
class MultiOutputRegressor {
 public:
  static MultiOutputRegressor fit(const Matrix& data, const Matrix& targets, int max_depth);

  Matrix predict(const Matrix& data) const;
  std::size_t outputs() const noexcept { return trees_.size(); }
  const CartTree& tree(std::size_t j) const { return trees_.at(j); }

 private:
  std::vector<CartTree> trees_;
};

}  // namespace lamina::trees
