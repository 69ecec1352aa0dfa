#pragma once

#include <memory>
#include <vector>

#include "lamina/kikai/grad_learner.hpp"
#include "lamina/layers/linear.hpp"

namespace lamina::kikai {

/// Fixed random feedback matrix: N(0, 1/fan_in) entries.
Matrix random_feedback(Rng& rng, std::size_t rows, std::size_t cols, std::size_t fan_in);

/// Feedback-alignment layer: Linear with an optional ReLU.
///
/// Parameters follow the local gradient of the layer's criterion. The target
/// for the incoming layer is x − δz·Bᵀ, with B a fixed random [in, out]
/// matrix standing in for Wᵀ, so an upstream SSE(0.5, sum) learner is trained
/// with ((δz·Bᵀ) ⊙ φ′(z))ᵀ·x.
class FALearner : public LearningMachine {
 public:
  FALearner(layers::Linear linear, bool relu, Criterion criterion, Optimizer optimizer, Rng& feedback_rng);
  FALearner(layers::Linear linear, bool relu, Criterion criterion, Optimizer optimizer, Matrix feedback);

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  Assessment assess_y(const IO& y, const IO& t) const override { return criterion_.assess(y, t); }

  bool has_accumulate() const override { return true; }
  void accumulate(const IO& x, const IO& t, State& state) override;
  /// Accumulates from a given gradient at this layer's output (δ_y):
  /// ΔW += (δ_y ⊙ φ′(z))ᵀ·x, Δb += Σ δ_y ⊙ φ′(z).
  void accumulate_delta(const IO& x, const Matrix& delta_y, State& state);
  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override;

  std::vector<Param*> params() override { return linear_.params(); }
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<FALearner>(*this); }
  std::string name() const override { return "FALearner"; }

  const Matrix& feedback() const noexcept { return feedback_; }
  layers::Linear& linear() noexcept { return linear_; }
  const Criterion& criterion() const noexcept { return criterion_; }

 private:
  void require_forward(const IO& x, const State& state) const;

  layers::Linear linear_;
  bool relu_;
  Criterion criterion_;
  Optimizer optimizer_;
  Matrix feedback_;
  std::uint64_t last_forward_ = State::kNoIO;
};

/// Direct-feedback-alignment hidden layer: a block such as
/// Linear → BatchNorm → ReLU whose error signal is the network output error
/// projected through a fixed [width, outputs] matrix B.
class DFALearner : public LearningMachine {
 public:
  DFALearner(layers::Sequential block, std::size_t output_width, Optimizer optimizer, Rng& feedback_rng);
  DFALearner(layers::Sequential block, Optimizer optimizer, Matrix feedback);

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  /// Hidden layers have no target of their own; assessed by MSE against t.
  Assessment assess_y(const IO& y, const IO& t) const override { return Criterion::mse().assess(y, t); }

  /// δ = global_error·Bᵀ fed through the block's local backward pass.
  /// global_error must be [b, output_width].
  void accumulate_global(const IO& x, const Matrix& global_error, State& state);
  /// Applies what accumulate_global gathered; t is unused.
  void step(const IO& x, const IO& t, State& state) override;
  /// x − ∂/∂x of the projected error through the block's true weights.
  IO step_x(const IO& x, const IO& t, State& state) override;

  std::vector<Param*> params() override { return block_.params(); }
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<DFALearner>(*this); }
  std::string name() const override { return "DFALearner"; }

  const Matrix& feedback() const noexcept { return feedback_; }
  layers::Sequential& block() noexcept { return block_; }

 private:
  layers::Sequential block_;
  Optimizer optimizer_;
  Matrix feedback_;
  std::uint64_t last_forward_ = State::kNoIO;
};

/// Hidden DFA layers topped by an FA output layer trained on cross entropy.
/// step() broadcasts the output error to every hidden layer in one pass; no
/// inter-layer step_x is involved. step_x requires step() first.
class DFANetwork : public LearningMachine {
 public:
  DFANetwork(std::vector<DFALearner> hidden, FALearner output);
  DFANetwork(const DFANetwork& other);
  DFANetwork& operator=(const DFANetwork&) = delete;

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  Assessment assess_y(const IO& y, const IO& t) const override { return output_.assess_y(y, t); }

  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override;

  void set_mode(Mode mode) override;
  std::vector<Param*> params() override;
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<DFANetwork>(*this); }
  std::string name() const override { return "DFANetwork"; }

  std::size_t hidden_count() const noexcept { return hidden_.size(); }
  DFALearner& hidden(std::size_t i) { return hidden_.at(i); }
  FALearner& output() noexcept { return output_; }

 private:
  std::vector<DFALearner> hidden_;
  FALearner output_;
};

}  // namespace lamina::kikai
