#pragma once

#include "lamina/kikai/grad_learner.hpp"

namespace lamina::kikai {

/// Which half of a reconstruction learner trains on the current tick.
enum class TrainPhase { Forward, Reverse, Both };

/// Target propagation through a learned approximate inverse.
///
/// The forward block trains on its local criterion toward t; the reverse block
/// is a GradLearner trained with MSE to map y back to x. step_x returns
/// reverse(t) evaluated in eval mode. With alternation on, odd epochs train
/// only the reverse block and even epochs only the forward block.
class TargetPropLearner : public LearningMachine {
 public:
  TargetPropLearner(layers::Sequential forward_block, Criterion criterion, Optimizer optimizer,
                    layers::Sequential reverse_block, Optimizer reverse_optimizer, bool alternate = true);

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  Assessment assess_y(const IO& y, const IO& t) const override { return criterion_.assess(y, t); }

  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override;

  /// One training tick for the given epoch: trains the reverse block on
  /// (y → x) or the forward block toward t, per the alternation schedule.
  void train_tick(const IO& x, const IO& y, const IO& t, int epoch);
  TrainPhase phase_for(int epoch) const noexcept;

  void set_epoch(int epoch) override { epoch_ = epoch; }
  void set_mode(Mode mode) override;

  std::vector<Param*> params() override;
  std::vector<Param*> forward_params() { return forward_.params(); }
  std::vector<Param*> reverse_params() { return reverse_.params(); }
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<TargetPropLearner>(*this); }
  std::string name() const override { return "TargetPropLearner"; }

  GradLearner& reverse() noexcept { return reverse_; }
  /// Mean reconstruction loss of the last reverse training tick.
  double last_reverse_loss() const noexcept { return last_reverse_loss_; }

 private:
  layers::Sequential forward_;
  Criterion criterion_;
  Optimizer optimizer_;
  GradLearner reverse_;
  bool alternate_;
  int epoch_ = 1;
  double last_reverse_loss_ = 0.0;
  std::uint64_t last_forward_ = State::kNoIO;
};

}  // namespace lamina::kikai
