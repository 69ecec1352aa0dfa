#include "lamina/trees/tree_layer.hpp"

#include "lamina/errors.hpp"

namespace lamina::trees {

TreeRegressorLearner::TreeRegressorLearner(std::size_t output_width, int max_depth, std::size_t capacity)
    : width_(output_width),
      ensemble_(std::make_shared<TreeRegressor>(max_depth), Voting::Mean, capacity) {
  if (width_ == 0) throw ConfigError("TreeRegressorLearner: output width must be positive");
}

IO TreeRegressorLearner::infer(const IO& x) const {
  if (ensemble_.empty()) return IO(Matrix(x.f().rows(), width_));
  return IO(ensemble_.predict(x.f()));
}

IO TreeRegressorLearner::forward(const IO& x, State& state, bool) {
  IO y = infer(x);
  state.store(this, x, "y", y);
  return y;
}

void TreeRegressorLearner::fit_once(const Matrix& x, const Matrix& t) {
  if (t.cols() != width_) {
    throw ShapeError("TreeRegressorLearner: target " + t.shape_str() + " for width " + std::to_string(width_));
  }
  ensemble_.update(x, t);
}

void TreeRegressorLearner::step(const IO& x, const IO& t, State& state) {
  fit_once(x.f(), t.f());
  kaku::mark_stepped(state, this, x);
}

IO TreeRegressorLearner::step_x(const IO&, const IO&, State&) {
  throw ConfigError("TreeRegressorLearner has no input target; it must be the first layer");
}

Matrix candidate_scores(const TemporalEnsemble& ensemble, const Matrix& candidates, std::span<const double> labels) {
  const std::size_t b = labels.size();
  if (b == 0 || candidates.rows() % b != 0) {
    throw ShapeError("candidate_scores: " + std::to_string(candidates.rows()) + " candidate rows for " +
                     std::to_string(b) + " labels");
  }
  const std::size_t k = candidates.rows() / b;
  Matrix scores(k, b);
  if (ensemble.empty()) return scores;
  const double w = 1.0 / static_cast<double>(ensemble.size());
  for (const Matrix& p : ensemble.member_predictions(candidates)) {
    for (std::size_t c = 0; c < k; ++c)
      for (std::size_t i = 0; i < b; ++i)
        if (p(c * b + i, 0) == labels[i]) scores(c, i) += w;
  }
  return scores;
}

std::vector<std::size_t> select_candidates(const Matrix& scores) {
  std::vector<std::size_t> best(scores.cols(), 0);
  for (std::size_t i = 0; i < scores.cols(); ++i)
    for (std::size_t c = 1; c < scores.rows(); ++c)
      if (scores(c, i) > scores(best[i], i)) best[i] = c;
  return best;
}

IO hill_climb_step_x(const TemporalEnsemble& ensemble, const LearningMachine& incoming, const IO& x_raw,
                     const Matrix& labels, std::size_t k, Rng& rng) {
  if (k < 1) throw ConfigError("hill_climb_step_x: K must be at least 1");
  const std::size_t b = x_raw.f().rows();
  if (labels.rows() != b || labels.cols() != 1) {
    throw ShapeError("hill_climb_step_x: labels " + labels.shape_str() + " for " + std::to_string(b) + " samples");
  }
  const Matrix candidates = incoming.sample(IO(repeat_rows(x_raw.f(), k)), rng).f();
  const auto chosen = select_candidates(candidate_scores(ensemble, candidates, labels.data()));
  std::vector<std::size_t> rows(b);
  for (std::size_t i = 0; i < b; ++i) rows[i] = chosen[i] * b + i;
  return IO(gather_rows(candidates, rows));
}

TreeClassifierLearner::TreeClassifierLearner(std::size_t n_classes, Rng rng, int max_depth, std::size_t capacity,
                                             HillClimbConfig hill_climb)
    : n_classes_(n_classes),
      rng_(rng),
      ensemble_(std::make_shared<TreeClassifier>(n_classes, max_depth), Voting::Majority, capacity, n_classes),
      hill_climb_(hill_climb) {
  if (hill_climb_.k < 1) throw ConfigError("TreeClassifierLearner: K must be at least 1");
}

IO TreeClassifierLearner::infer(const IO& x) const {
  if (ensemble_.empty()) return IO(Matrix(x.f().rows(), n_classes_));
  return IO(ensemble_.vote_fractions(x.f()));
}

IO TreeClassifierLearner::forward(const IO& x, State& state, bool) {
  IO y = infer(x);
  state.store(this, x, "y", y);
  return y;
}

void TreeClassifierLearner::fit_once(const Matrix& x, const Matrix& labels) { ensemble_.update(x, labels); }

void TreeClassifierLearner::step(const IO& x, const IO& t, State& state) {
  fit_once(x.f(), t.f());
  kaku::mark_stepped(state, this, x);
}

IO TreeClassifierLearner::step_x(const IO& x, const IO& t, State& state) {
  if (incoming_ == nullptr) throw OrderingError("TreeClassifierLearner::step_x: no incoming machine bound");
  const IO& x_raw = state.fetch<IO>(incoming_, x, kaku::kSourceKey);
  return hill_climb_step_x(ensemble_, *incoming_, x_raw, t.f(), hill_climb_.k, rng_);
}

}  // namespace lamina::trees
