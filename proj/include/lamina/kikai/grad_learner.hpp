#pragma once

#include <optional>

#include "lamina/kaku/criterion.hpp"
#include "lamina/kaku/machine.hpp"
#include "lamina/layers/sequential.hpp"

namespace lamina::kikai {

using kaku::Assessment;
using kaku::Criterion;
using kaku::IO;
using kaku::LearningMachine;
using kaku::Mode;
using kaku::Optimizer;
using kaku::Param;
using kaku::State;

/// How a GradLearner turns its target into a target for its input.
///
/// Each iteration moves x by −step_size·∂L/∂x. The default (one iteration,
/// step 1, learner criterion) is the gradient target t_x = x − ∇ₓL, which
/// makes an upstream SSE(0.5, sum) learner see exactly the backpropagated
/// gradient.
struct XUpdate {
  double step_size = 1.0;
  int iterations = 1;
  /// Loss differentiated for the input update; defaults to the learner's.
  std::optional<Criterion> criterion;
};

/// Learner updated by gradient descent on its own criterion.
class GradLearner : public LearningMachine {
 public:
  GradLearner(layers::Sequential module, Criterion criterion, Optimizer optimizer, XUpdate x_update = {});

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  IO sample(const IO& x, Rng& rng) const override;
  Assessment assess_y(const IO& y, const IO& t) const override { return criterion_.assess(y, t); }

  bool has_accumulate() const override { return true; }
  /// One backward pass from the cached forward: adds parameter gradients and
  /// records ∂L/∂x for step_x.
  void accumulate(const IO& x, const IO& t, State& state) override;
  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override;

  std::vector<Param*> params() override { return module_.params(); }
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<GradLearner>(*this); }
  std::string name() const override { return "GradLearner"; }

  layers::Sequential& module() noexcept { return module_; }
  const layers::Sequential& module() const noexcept { return module_; }
  const Criterion& criterion() const noexcept { return criterion_; }
  Optimizer& optimizer() noexcept { return optimizer_; }
  const XUpdate& x_update() const noexcept { return x_update_; }

 private:
  void require_forward(const IO& x, const State& state) const;

  layers::Sequential module_;
  Criterion criterion_;
  Optimizer optimizer_;
  XUpdate x_update_;
  std::uint64_t last_forward_ = State::kNoIO;
};

}  // namespace lamina::kikai
