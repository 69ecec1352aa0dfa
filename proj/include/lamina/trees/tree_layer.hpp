#pragma once

#include <vector>

#include "lamina/kaku/criterion.hpp"
#include "lamina/kaku/machine.hpp"
#include "lamina/trees/ensemble.hpp"

namespace lamina::trees {

using kaku::Assessment;
using kaku::Criterion;
using kaku::IO;
using kaku::LearningMachine;
using kaku::Param;
using kaku::State;

/// Layer of multi-output regression trees. Each step fits one new
/// multi-output tree on (x, t) and pushes it into the ensemble; the output is
/// the ensemble mean. Before the first step the output is all zeros.
/// It has no input target, so it can only sit first in a stack.
class TreeRegressorLearner : public LearningMachine {
 public:
  TreeRegressorLearner(std::size_t output_width, int max_depth = 11, std::size_t capacity = 9);

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  Assessment assess_y(const IO& y, const IO& t) const override { return Criterion::mse().assess(y, t); }
  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override;

  std::vector<Param*> params() override { return {}; }
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<TreeRegressorLearner>(*this); }
  std::string name() const override { return "TreeRegressorLearner"; }

  const TemporalEnsemble& ensemble() const noexcept { return ensemble_; }
  /// Fit one tree outside a train step, e.g. to give the layer an output.
  void fit_once(const Matrix& x, const Matrix& t);
  std::size_t output_width() const noexcept { return width_; }

 private:
  std::size_t width_;
  TemporalEnsemble ensemble_;
};

struct HillClimbConfig {
  /// Candidates drawn per sample.
  std::size_t k = 8;
};

/// [K, b] score of every candidate: the fraction of ensemble members that
/// predict labels[i] for candidate row k·b + i.
Matrix candidate_scores(const TemporalEnsemble& ensemble, const Matrix& candidates, std::span<const double> labels);

/// Per-sample argmax over the K candidates (rows of `scores`); the lowest
/// candidate index wins ties.
std::vector<std::size_t> select_candidates(const Matrix& scores);

/// Samples K outputs of the stochastic `incoming` machine for every row of
/// x_raw in one batch, scores them against the label column and returns the
/// best candidate per sample as a [b, width] target.
IO hill_climb_step_x(const TemporalEnsemble& ensemble, const LearningMachine& incoming, const IO& x_raw,
                     const Matrix& labels, std::size_t k, Rng& rng);

/// Layer of classification trees voting over n_classes. The output is the
/// vote fraction per class, so its argmax is the majority vote. The input
/// target comes from hill climbing over stochastic passes of the incoming
/// machine. A stack binds its predecessor automatically; the incoming input
/// is read from the stack's state.
class TreeClassifierLearner : public LearningMachine {
 public:
  TreeClassifierLearner(std::size_t n_classes, Rng rng, int max_depth = 10, std::size_t capacity = 9,
                        HillClimbConfig hill_climb = {});

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  /// Cross entropy with vote fractions as logits.
  Assessment assess_y(const IO& y, const IO& t) const override {
    return Criterion::cross_entropy().assess(y, t);
  }
  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override;

  void bind_incoming(const LearningMachine* incoming) noexcept { incoming_ = incoming; }
  void set_predecessor(const LearningMachine* predecessor) override { incoming_ = predecessor; }
  const LearningMachine* incoming() const noexcept { return incoming_; }

  std::vector<Param*> params() override { return {}; }
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<TreeClassifierLearner>(*this); }
  std::string name() const override { return "TreeClassifierLearner"; }

  const TemporalEnsemble& ensemble() const noexcept { return ensemble_; }
  void fit_once(const Matrix& x, const Matrix& labels);
  const HillClimbConfig& hill_climb() const noexcept { return hill_climb_; }

 private:
  std::size_t n_classes_;
  Rng rng_;
  TemporalEnsemble ensemble_;
  HillClimbConfig hill_climb_;
  const LearningMachine* incoming_ = nullptr;
};

}  // namespace lamina::trees
