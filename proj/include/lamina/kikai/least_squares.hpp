#pragma once

#include "lamina/kikai/grad_learner.hpp"
#include "lamina/layers/linear.hpp"

namespace lamina::kikai {

/// Ridge input update for a linear map z = x·Wᵀ + b: the Δx minimizing
/// ‖Δx·Wᵀ − (z_target − z)‖² + lambda·‖Δx‖², returned as x + Δx.
Matrix ridge_input_target(const Matrix& weight, const Matrix& x, const Matrix& z, const Matrix& z_target,
                          double lambda);

/// step_x for a bare linear layer: treats t as the target of the layer's
/// output and solves for the input change by ridge regression.
class LeastSquaresStepX {
 public:
  LeastSquaresStepX(const layers::Linear& layer, double lambda = 1e-3) : layer_(&layer), lambda_(lambda) {}

  /// Requires the layer to have run forward (its cached input is not used,
  /// but the contract mirrors the learner's).
  IO step_x(const IO& x, const IO& t) const;

  double lambda() const noexcept { return lambda_; }

 private:
  const layers::Linear* layer_;
  double lambda_;
};

/// Linear layer followed by an activation block. Parameters train by gradient
/// descent on the local criterion; the input target comes from a gradient step
/// through the activation block to get a target for the linear output, then a
/// ridge solve through the linear map.
class LeastSquaresLearner : public LearningMachine {
 public:
  LeastSquaresLearner(layers::Linear linear, layers::Sequential post, Criterion criterion, Optimizer optimizer,
                      double lambda = 1e-3);

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  Assessment assess_y(const IO& y, const IO& t) const override { return criterion_.assess(y, t); }

  bool has_accumulate() const override { return true; }
  void accumulate(const IO& x, const IO& t, State& state) override;
  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override;

  std::vector<Param*> params() override;
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<LeastSquaresLearner>(*this); }
  std::string name() const override { return "LeastSquaresLearner"; }

  layers::Linear& linear() noexcept { return linear_; }
  double lambda() const noexcept { return lambda_; }

 private:
  void require_forward(const IO& x, const State& state) const;

  layers::Linear linear_;
  layers::Sequential post_;
  Criterion criterion_;
  Optimizer optimizer_;
  double lambda_;
  std::uint64_t last_forward_ = State::kNoIO;
};

}  // namespace lamina::kikai
