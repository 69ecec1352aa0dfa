#include "lamina/trees/ensemble.hpp"

#include <algorithm>

#include "lamina/errors.hpp"

namespace lamina::trees {

void TreeClassifier::fit(const Matrix& x, const Matrix& t) {
  if (t.cols() != 1) throw ShapeError("TreeClassifier::fit: labels must be a column, got " + t.shape_str());
  CartConfig config;
  config.task = TreeTask::Classification;
  config.max_depth = max_depth_;
  config.n_classes = n_classes_;
  tree_ = std::make_shared<const CartTree>(CartTree::fit(x, t.data(), config));
}

Matrix TreeClassifier::predict(const Matrix& x) const { return tree().predict(x); }

const CartTree& TreeClassifier::tree() const {
  if (!tree_) throw OrderingError("TreeClassifier: predict before fit");
  return *tree_;
}

TemporalEnsemble::TemporalEnsemble(std::shared_ptr<const Estimator> base, Voting voting, std::size_t capacity,
                                   std::size_t n_classes)
    : base_(std::move(base)), voting_(voting), capacity_(capacity), n_classes_(n_classes) {
  if (!base_) throw ConfigError("TemporalEnsemble: no base estimator");
  if (capacity_ < 1) throw ConfigError("TemporalEnsemble: capacity must be at least 1");
  if (voting_ == Voting::Majority && n_classes_ < 1) throw ConfigError("TemporalEnsemble: voting needs n_classes");
}

void TemporalEnsemble::update(const Matrix& x, const Matrix& t) {
  std::unique_ptr<Estimator> fitted = base_->fresh();
  fitted->fit(x, t);
  if (members_.size() == capacity_) members_.pop_front();
  members_.push_back({std::move(fitted), updates_++});
}

void TemporalEnsemble::require_members(const char* what) const {
  if (members_.empty()) throw EmptyInputError(std::string("TemporalEnsemble::") + what + ": ensemble is empty");
}

std::vector<Matrix> TemporalEnsemble::member_predictions(const Matrix& x) const {
  require_members("member_predictions");
  std::vector<Matrix> out;
  out.reserve(members_.size());
  for (const auto& m : members_) out.push_back(m.estimator->predict(x));
  return out;
}

Matrix TemporalEnsemble::vote_fractions(const Matrix& x) const {
  require_members("vote_fractions");
  if (voting_ != Voting::Majority) throw ConfigError("TemporalEnsemble::vote_fractions: ensemble does not vote");
  Matrix votes(x.rows(), n_classes_);
  const double w = 1.0 / static_cast<double>(members_.size());
  for (const auto& m : members_) {
    const Matrix p = m.estimator->predict(x);
    for (std::size_t i = 0; i < x.rows(); ++i) {
      const auto c = static_cast<std::size_t>(p(i, 0));
      if (c >= n_classes_) throw IndexError("TemporalEnsemble: member predicted class " + std::to_string(c));
      votes(i, c) += w;
    }
  }
  return votes;
}

Matrix TemporalEnsemble::predict(const Matrix& x) const {
  require_members("predict");
  if (voting_ == Voting::Majority) {
    const auto winners = argmax_rows(vote_fractions(x));
    Matrix out(x.rows(), 1);
    for (std::size_t i = 0; i < winners.size(); ++i) out(i, 0) = static_cast<double>(winners[i]);
    return out;
  }
  Matrix sum = members_.front().estimator->predict(x);
  for (std::size_t k = 1; k < members_.size(); ++k) sum += members_[k].estimator->predict(x);
  sum *= 1.0 / static_cast<double>(members_.size());
  return sum;
}

}  // namespace lamina::trees
