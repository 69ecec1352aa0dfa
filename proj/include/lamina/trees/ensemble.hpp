#pragma once

#include <cstdint>
#include <deque>
#include <memory>

#include "lamina/trees/cart.hpp"

namespace lamina::trees {

/// Something an ensemble can refit: fit on (x, t) once, then predict.
class Estimator {
 public:
  virtual ~Estimator() = default;
  virtual void fit(const Matrix& x, const Matrix& t) = 0;
  virtual Matrix predict(const Matrix& x) const = 0;
  virtual std::unique_ptr<Estimator> fresh() const = 0;
};

/// One regression tree per target column.
class TreeRegressor : public Estimator {
 public:
  explicit TreeRegressor(int max_depth = 11) : max_depth_(max_depth) {}
  void fit(const Matrix& x, const Matrix& t) override { model_ = MultiOutputRegressor::fit(x, t, max_depth_); }
  Matrix predict(const Matrix& x) const override { return model_.predict(x); }
  std::unique_ptr<Estimator> fresh() const override { return std::make_unique<TreeRegressor>(max_depth_); }
  const MultiOutputRegressor& model() const noexcept { return model_; }

 private:
  int max_depth_;
  MultiOutputRegressor model_;
};

/// Classification tree on a [n, 1] label column; predicts class indices.
class TreeClassifier : public Estimator {
 public:
  TreeClassifier(std::size_t n_classes, int max_depth = 10) : n_classes_(n_classes), max_depth_(max_depth) {}
  void fit(const Matrix& x, const Matrix& t) override;
  Matrix predict(const Matrix& x) const override;
  std::unique_ptr<Estimator> fresh() const override {
    return std::make_unique<TreeClassifier>(n_classes_, max_depth_);
  }
  const CartTree& tree() const;

 private:
  std::size_t n_classes_;
  int max_depth_;
  std::shared_ptr<const CartTree> tree_;
};

enum class Voting { Mean, Majority };

/// Capacity-bounded FIFO of estimators, each fitted on one minibatch.
/// Members are immutable once fitted, so copies share them.
class TemporalEnsemble {
 public:
  TemporalEnsemble(std::shared_ptr<const Estimator> base, Voting voting, std::size_t capacity = 9,
                   std::size_t n_classes = 0);

  /// Drops the oldest member when full, then fits a fresh estimator on (x, t)
  /// and appends it.
  void update(const Matrix& x, const Matrix& t);
  /// Mean of member predictions, or the majority class as a [n, 1] column
  /// (lowest class wins ties).
  Matrix predict(const Matrix& x) const;
  /// [n, n_classes] fraction of members voting for each class.
  Matrix vote_fractions(const Matrix& x) const;
  /// Each member's prediction, oldest first.
  std::vector<Matrix> member_predictions(const Matrix& x) const;

  std::size_t size() const noexcept { return members_.size(); }
  bool empty() const noexcept { return members_.empty(); }
  std::size_t capacity() const noexcept { return capacity_; }
  Voting voting() const noexcept { return voting_; }
  std::size_t n_classes() const noexcept { return n_classes_; }
  const Estimator& member(std::size_t i) const { return *members_.at(i).estimator; }
  /// Update sequence number of member i (0 for the first update ever made).
  std::uint64_t member_serial(std::size_t i) const { return members_.at(i).serial; }
  std::uint64_t updates() const noexcept { return updates_; }

 private:
  struct Member {
    std::shared_ptr<const Estimator> estimator;
    std::uint64_t serial;
  };

  void require_members(const char* what) const;

  std::shared_ptr<const Estimator> base_;
  Voting voting_;
  std::size_t capacity_;
  std::size_t n_classes_;
  std::deque<Member> members_;
  std::uint64_t updates_ = 0;
};

}  // namespace lamina::trees
