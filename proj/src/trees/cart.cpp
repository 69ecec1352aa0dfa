#include "lamina/trees/cart.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lamina/errors.hpp"

namespace lamina::trees {

PresortedFeatures PresortedFeatures::build(const Matrix& data) {
  PresortedFeatures p;
  const std::size_t n = data.rows(), f = data.cols();
  p.order.resize(f);
  p.constant.assign(f, true);
  for (std::size_t j = 0; j < f; ++j) {
    for (std::size_t i = 1; i < n && p.constant[j]; ++i)
      if (data(i, j) != data(0, j)) p.constant[j] = false;
    if (p.constant[j]) continue;
    auto& ord = p.order[j];
    ord.resize(n);
    std::iota(ord.begin(), ord.end(), 0u);
    std::stable_sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) { return data(a, j) < data(b, j); });
  }
  return p;
}

double regression_split_score(double sum_left, double n_left, double sum_right, double n_right) {
  return sum_left * sum_left / n_left + sum_right * sum_right / n_right;
}

double gini_split_score(double sq_counts_left, double n_left, double sq_counts_right, double n_right) {
  return sq_counts_left / n_left + sq_counts_right / n_right;
}

bool split_improves(double candidate, double best) {
  if (best == -std::numeric_limits<double>::infinity()) return true;
  return candidate > best + 1e-12 * std::max(1.0, std::abs(best));
}

namespace {

// Running statistics of one frontier node.
struct NodeStats {
  double n = 0.0;
  double sum = 0.0;                 // regression
  double sumsq = 0.0;               // regression, for purity
  std::vector<double> counts;       // classification
};

struct Candidate {
  double score = -std::numeric_limits<double>::infinity();
  int feature = -1;
  double threshold = 0.0;
};

bool is_pure(const NodeStats& s, TreeTask task) {
  if (task == TreeTask::Classification) {
    return std::count_if(s.counts.begin(), s.counts.end(), [](double c) { return c > 0.0; }) <= 1;
  }
  // Variance numerically zero.
  const double mean = s.sum / s.n;
  return s.sumsq / s.n - mean * mean <= 1e-14 * std::max(1.0, mean * mean);
}

std::vector<double> leaf_value(const NodeStats& s, TreeTask task) {
  if (task == TreeTask::Regression) return {s.sum / s.n};
  std::vector<double> p = s.counts;
  for (double& v : p) v /= s.n;
  return p;
}

}  // namespace

CartTree CartTree::fit(const Matrix& data, std::span<const double> targets, const CartConfig& config) {
  return fit(data, targets, config, PresortedFeatures::build(data));
}

CartTree CartTree::fit(const Matrix& data, std::span<const double> targets, const CartConfig& config,
                       const PresortedFeatures& presorted) {
  const std::size_t n = data.rows(), f = data.cols();
  if (n == 0) throw EmptyInputError("CartTree::fit: no samples");
  if (targets.size() != n) {
    throw ShapeError("CartTree::fit: " + std::to_string(targets.size()) + " targets for " + std::to_string(n) +
                     " samples");
  }
  if (config.max_depth < 0) throw ConfigError("CartTree::fit: negative max_depth");
  const bool classify = config.task == TreeTask::Classification;
  std::size_t n_classes = config.n_classes;
  std::vector<std::size_t> labels;
  if (classify) {
    labels.resize(n);
    std::size_t max_label = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double v = targets[i];
      if (!(v >= 0.0) || v != std::floor(v)) throw IndexError("CartTree::fit: class label is not a non-negative integer");
      labels[i] = static_cast<std::size_t>(v);
      max_label = std::max(max_label, labels[i]);
    }
    if (n_classes == 0) n_classes = max_label + 1;
    if (max_label >= n_classes) {
      throw IndexError("CartTree::fit: label " + std::to_string(max_label) + " outside [0, " +
                       std::to_string(n_classes) + ")");
    }
  }

  auto add_sample = [&](NodeStats& s, std::size_t i) {
    s.n += 1.0;
    if (classify) {
      s.counts[labels[i]] += 1.0;
    } else {
      s.sum += targets[i];
      s.sumsq += targets[i] * targets[i];
    }
  };
  auto empty_stats = [&] {
    NodeStats s;
    if (classify) s.counts.assign(n_classes, 0.0);
    return s;
  };

  CartTree tree;
  tree.config_ = config;
  tree.config_.n_classes = n_classes;

  std::vector<int> node_of(n, 0);
  std::vector<NodeStats> stats;
  {
    NodeStats root = empty_stats();
    for (std::size_t i = 0; i < n; ++i) add_sample(root, i);
    stats.push_back(root);
    TreeNode node;
    node.samples = n;
    node.value = leaf_value(root, config.task);
    tree.nodes_.push_back(node);
  }
  std::vector<int> frontier{0};

  for (int depth = 0; depth < config.max_depth && !frontier.empty(); ++depth) {
    // Local index of each splittable frontier node, -1 otherwise.
    std::vector<int> local(tree.nodes_.size(), -1);
    std::vector<int> active;
    for (int id : frontier) {
      const NodeStats& s = stats[static_cast<std::size_t>(id)];
      if (s.n >= static_cast<double>(config.min_samples_split) && s.n >= 2.0 && !is_pure(s, config.task)) {
        local[static_cast<std::size_t>(id)] = static_cast<int>(active.size());
        active.push_back(id);
      }
    }
    if (active.empty()) break;

    std::vector<Candidate> best(active.size());
    std::vector<NodeStats> left(active.size());
    std::vector<double> last_value(active.size());
    std::vector<char> seen(active.size());
    std::vector<double> sq_left(active.size()), sq_right(active.size());
    std::vector<std::vector<double>> right_counts(active.size());

    for (std::size_t j = 0; j < f; ++j) {
      if (presorted.constant[j]) continue;
      for (std::size_t a = 0; a < active.size(); ++a) {
        left[a] = empty_stats();
        seen[a] = 0;
        if (classify) {
          const NodeStats& tot = stats[static_cast<std::size_t>(active[a])];
          right_counts[a] = tot.counts;
          sq_left[a] = 0.0;
          sq_right[a] = 0.0;
          for (double c : tot.counts) sq_right[a] += c * c;
        }
      }
      for (std::uint32_t s : presorted.order[j]) {
        const int node = node_of[s];
        if (node < 0) continue;
        const int a = local[static_cast<std::size_t>(node)];
        if (a < 0) continue;
        const double v = data(s, j);
        const NodeStats& tot = stats[static_cast<std::size_t>(node)];
        if (seen[a] && v > last_value[a]) {
          const double nl = left[a].n, nr = tot.n - nl;
          const double score = classify ? gini_split_score(sq_left[a], nl, sq_right[a], nr)
                                        : regression_split_score(left[a].sum, nl, tot.sum - left[a].sum, nr);
          if (split_improves(score, best[a].score)) {
            double thr = 0.5 * (last_value[a] + v);
            if (thr >= v) thr = last_value[a];
            best[a] = {score, static_cast<int>(j), thr};
          }
        }
        if (classify) {
          const std::size_t k = labels[s];
          sq_left[a] += 2.0 * left[a].counts[k] + 1.0;
          sq_right[a] -= 2.0 * right_counts[a][k] - 1.0;
          right_counts[a][k] -= 1.0;
        }
        add_sample(left[a], s);
        last_value[a] = v;
        seen[a] = 1;
      }
    }

    // Materialize children.
    std::vector<int> next;
    std::vector<int> left_child(tree.nodes_.size(), -1);
    for (std::size_t a = 0; a < active.size(); ++a) {
      if (best[a].feature < 0) continue;
      const int id = active[a];
      const int l = static_cast<int>(tree.nodes_.size());
      for (int c = 0; c < 2; ++c) {
        TreeNode child;
        child.depth = depth + 1;
        tree.nodes_.push_back(child);
        stats.push_back(empty_stats());
      }
      TreeNode& parent = tree.nodes_[static_cast<std::size_t>(id)];
      parent.feature = best[a].feature;
      parent.threshold = best[a].threshold;
      parent.left = l;
      parent.right = l + 1;
      left_child[static_cast<std::size_t>(id)] = l;
      next.push_back(l);
      next.push_back(l + 1);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const int node = node_of[i];
      if (node < 0) continue;
      const int l = static_cast<std::size_t>(node) < left_child.size() ? left_child[static_cast<std::size_t>(node)] : -1;
      if (l < 0) {
        node_of[i] = -1;  // settled in a leaf
        continue;
      }
      const TreeNode& parent = tree.nodes_[static_cast<std::size_t>(node)];
      const int child = data(i, static_cast<std::size_t>(parent.feature)) <= parent.threshold ? l : l + 1;
      node_of[i] = child;
      add_sample(stats[static_cast<std::size_t>(child)], i);
    }
    for (int id : next) {
      TreeNode& node = tree.nodes_[static_cast<std::size_t>(id)];
      node.samples = static_cast<std::size_t>(stats[static_cast<std::size_t>(id)].n);
      node.value = leaf_value(stats[static_cast<std::size_t>(id)], config.task);
    }
    frontier = std::move(next);
  }
  return tree;
}

const TreeNode& CartTree::leaf_for(std::span<const double> row) const {
  const TreeNode* node = &nodes_.front();
  while (!node->is_leaf()) {
    const auto f = static_cast<std::size_t>(node->feature);
    if (f >= row.size()) throw ShapeError("CartTree: row has " + std::to_string(row.size()) + " features");
    node = &nodes_[static_cast<std::size_t>(row[f] <= node->threshold ? node->left : node->right)];
  }
  return *node;
}

double CartTree::predict_row(std::span<const double> row) const {
  const TreeNode& leaf = leaf_for(row);
  if (config_.task == TreeTask::Regression) return leaf.value.front();
  return static_cast<double>(std::max_element(leaf.value.begin(), leaf.value.end()) - leaf.value.begin());
}

Matrix CartTree::predict(const Matrix& data) const {
  Matrix out(data.rows(), 1);
  for (std::size_t i = 0; i < data.rows(); ++i) out(i, 0) = predict_row(data.row_span(i));
  return out;
}

int CartTree::depth() const noexcept {
  int d = 0;
  for (const auto& node : nodes_) d = std::max(d, node.depth);
  return d;
}

std::size_t CartTree::leaf_count() const noexcept {
  return static_cast<std::size_t>(std::count_if(nodes_.begin(), nodes_.end(), [](const TreeNode& n) { return n.is_leaf(); }));
}

MultiOutputRegressor MultiOutputRegressor::fit(const Matrix& data, const Matrix& targets, int max_depth) {
  if (data.rows() == 0) throw EmptyInputError("MultiOutputRegressor::fit: no samples");
  if (targets.rows() != data.rows()) {
    throw ShapeError("MultiOutputRegressor::fit: targets " + targets.shape_str() + " for data " + data.shape_str());
  }
  const PresortedFeatures presorted = PresortedFeatures::build(data);
  CartConfig config;
  config.task = TreeTask::Regression;
  config.max_depth = max_depth;
  MultiOutputRegressor m;
  m.trees_.reserve(targets.cols());
  std::vector<double> column(targets.rows());
  for (std::size_t j = 0; j < targets.cols(); ++j) {
    for (std::size_t i = 0; i < targets.rows(); ++i) column[i] = targets(i, j);
    m.trees_.push_back(CartTree::fit(data, column, config, presorted));
  }
  return m;
}

Matrix MultiOutputRegressor::predict(const Matrix& data) const {
  Matrix out(data.rows(), trees_.size());
  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto row = data.row_span(i);
    for (std::size_t j = 0; j < trees_.size(); ++j) out(i, j) = trees_[j].predict_row(row);
  }
  return out;
}

}  // namespace lamina::trees
