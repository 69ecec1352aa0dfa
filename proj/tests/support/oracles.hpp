#pragma once

// Independent reference implementations used by the unit tests and the
// acceptance binary. Each one is the slow, obvious version of something the
// library does fast.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lamina/matrix.hpp"
#include "lamina/rng.hpp"
#include "lamina/trees/cart.hpp"

namespace lamina::oracle {

inline Matrix triple_loop_matmul(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * b(k, j);
      out(i, j) = s;
    }
  return out;
}

/// Gauss-Jordan inverse with partial pivoting.
inline Matrix inverse(Matrix a) {
  const std::size_t n = a.rows();
  Matrix inv = Matrix::identity(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a(r, c)) > std::abs(a(p, c))) p = r;
    for (std::size_t k = 0; k < n; ++k) {
      std::swap(a(c, k), a(p, k));
      std::swap(inv(c, k), inv(p, k));
    }
    const double d = a(c, c);
    for (std::size_t k = 0; k < n; ++k) {
      a(c, k) /= d;
      inv(c, k) /= d;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c) continue;
      const double f = a(r, c);
      for (std::size_t k = 0; k < n; ++k) {
        a(r, k) -= f * a(c, k);
        inv(r, k) -= f * inv(c, k);
      }
    }
  }
  return inv;
}

/// (aᵀa + λI)⁻¹ aᵀ b with an explicit inverse.
inline Matrix normal_equations(const Matrix& a, const Matrix& b, double lambda) {
  Matrix ata = triple_loop_matmul(transpose(a), a);
  for (std::size_t i = 0; i < ata.rows(); ++i) ata(i, i) += lambda;
  return triple_loop_matmul(inverse(ata), triple_loop_matmul(transpose(a), b));
}

// --- CART -------------------------------------------------------------------

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double impurity = std::numeric_limits<double>::infinity();
};

/// Total impurity of a set of samples: Σ(y − ȳ)² for regression, n·(1 − Σp²)
/// for classification.
inline double impurity(const std::vector<double>& targets, const std::vector<std::size_t>& rows,
                       trees::TreeTask task, std::size_t n_classes) {
  if (rows.empty()) return 0.0;
  const double n = static_cast<double>(rows.size());
  if (task == trees::TreeTask::Regression) {
    double mean = 0.0;
    for (auto r : rows) mean += targets[r];
    mean /= n;
    double s = 0.0;
    for (auto r : rows) s += (targets[r] - mean) * (targets[r] - mean);
    return s;
  }
  std::vector<double> counts(n_classes, 0.0);
  for (auto r : rows) counts[static_cast<std::size_t>(targets[r])] += 1.0;
  double sq = 0.0;
  for (double c : counts) sq += (c / n) * (c / n);
  return n * (1.0 - sq);
}

/// Tries every feature and every midpoint between consecutive distinct values
/// and keeps the lowest child impurity; near-ties (relative 1e-9) go to the
/// lowest feature, then the lowest threshold.
inline SplitChoice exhaustive_best_split(const Matrix& data, const std::vector<double>& targets,
                                         const std::vector<std::size_t>& rows, trees::TreeTask task,
                                         std::size_t n_classes) {
  std::vector<SplitChoice> all;
  for (std::size_t f = 0; f < data.cols(); ++f) {
    std::set<double> values;
    for (auto r : rows) values.insert(data(r, f));
    if (values.size() < 2) continue;
    std::vector<double> v(values.begin(), values.end());
    for (std::size_t k = 0; k + 1 < v.size(); ++k) {
      double thr = 0.5 * (v[k] + v[k + 1]);
      if (thr >= v[k + 1]) thr = v[k];
      std::vector<std::size_t> left, right;
      for (auto r : rows) (data(r, f) <= thr ? left : right).push_back(r);
      all.push_back({static_cast<int>(f), thr,
                     impurity(targets, left, task, n_classes) + impurity(targets, right, task, n_classes)});
    }
  }
  SplitChoice best;
  for (const auto& c : all) best.impurity = std::min(best.impurity, c.impurity);
  for (const auto& c : all) {
    if (c.impurity <= best.impurity + 1e-9 * std::max(1.0, std::abs(best.impurity))) {
      best = {c.feature, c.threshold, best.impurity};
      break;
    }
  }
  return best;
}

/// Walks a fitted tree and checks every node against the exhaustive search on
/// the samples that reach it. Returns a description of the first mismatch.
inline std::optional<std::string> verify_tree(const trees::CartTree& tree, const Matrix& data,
                                              const std::vector<double>& targets) {
  const auto& cfg = tree.config();
  struct Item {
    int node;
    std::vector<std::size_t> rows;
  };
  std::vector<Item> stack;
  std::vector<std::size_t> all(data.rows());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  stack.push_back({0, all});
  while (!stack.empty()) {
    Item item = std::move(stack.back());
    stack.pop_back();
    const trees::TreeNode& node = tree.nodes().at(static_cast<std::size_t>(item.node));
    if (node.samples != item.rows.size()) return "node " + std::to_string(item.node) + ": sample count";
    const double imp = impurity(targets, item.rows, cfg.task, cfg.n_classes);
    const bool pure = imp <= 1e-12 * std::max(1.0, static_cast<double>(item.rows.size()));
    const SplitChoice best = exhaustive_best_split(data, targets, item.rows, cfg.task, cfg.n_classes);
    const bool must_stop =
        node.depth >= cfg.max_depth || pure || item.rows.size() < cfg.min_samples_split || best.feature < 0;
    if (must_stop != node.is_leaf()) return "node " + std::to_string(item.node) + ": leaf/split decision";
    if (node.is_leaf()) continue;
    if (node.feature != best.feature || node.threshold != best.threshold) {
      return "node " + std::to_string(item.node) + ": split (" + std::to_string(node.feature) + ", " +
             std::to_string(node.threshold) + ") vs exhaustive (" + std::to_string(best.feature) + ", " +
             std::to_string(best.threshold) + ")";
    }
    std::vector<std::size_t> left, right;
    for (auto r : item.rows) (data(r, static_cast<std::size_t>(node.feature)) <= node.threshold ? left : right).push_back(r);
    stack.push_back({node.left, std::move(left)});
    stack.push_back({node.right, std::move(right)});
  }
  return std::nullopt;
}

/// Random small dataset; integer-valued features when `discrete`, to force
/// ties.
inline Matrix random_features(Rng& rng, std::size_t n, std::size_t f, bool discrete) {
  Matrix x(n, f);
  for (double& v : x.data()) v = discrete ? static_cast<double>(rng.below(4)) : rng.normal();
  return x;
}

// --- ensembles and hill climbing ---------------------------------------------

/// Most frequent value in `votes`; lowest on ties.
inline std::size_t majority(const std::vector<std::size_t>& votes, std::size_t n_classes) {
  std::vector<std::size_t> count(n_classes, 0);
  for (auto v : votes) ++count[v];
  std::size_t best = 0;
  for (std::size_t c = 1; c < n_classes; ++c)
    if (count[c] > count[best]) best = c;
  return best;
}

/// For each sample (column), the first row index attaining the column maximum.
inline std::vector<std::size_t> brute_force_argmax(const Matrix& scores) {
  std::vector<std::size_t> out(scores.cols(), 0);
  for (std::size_t i = 0; i < scores.cols(); ++i) {
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < scores.rows(); ++k) {
      if (scores(k, i) > best) {
        best = scores(k, i);
        out[i] = k;
      }
    }
  }
  return out;
}

/// Reference FIFO of update serials with a fixed capacity.
struct FifoModel {
  std::size_t capacity;
  std::deque<std::uint64_t> serials;
  std::uint64_t next = 0;

  void push() {
    if (serials.size() == capacity) serials.pop_front();
    serials.push_back(next++);
  }
};

}  // namespace lamina::oracle
