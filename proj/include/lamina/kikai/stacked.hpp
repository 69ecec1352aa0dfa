#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "lamina/kaku/criterion.hpp"
#include "lamina/kaku/machine.hpp"

namespace lamina::kikai {

using kaku::Criterion;
using kaku::IO;
using kaku::LearningMachine;
using kaku::Mode;
using kaku::Param;
using kaku::State;

/// Order of step and step_x within each layer of the backward walk.
enum class StepOrder { StepFirst, StepXFirst };

/// Per-train-step record. Per-layer vectors are indexed by layer and only
/// filled when diagnostics are on (mad is always filled where shapes allow).
struct StepMetrics {
  double loss = 0.0;              // global criterion on the forward output, before any update
  std::vector<double> ger;        // global error reduction of each layer's update
  std::vector<double> ler;        // local error reduction of each layer's update
  std::vector<double> mad;        // mean |t − y| per layer; NaN when t is not output-shaped
  std::size_t step_x_calls = 0;
};

/// Linear stack of learning machines trained back to front. Each layer gets
/// as target the IO its successor's step_x produced; the last gets the global
/// target. The first layer's step_x is never called during training.
///
/// With diagnostics on, each layer's update is bracketed by loss probes:
/// GER compares the global loss of the suffix starting at the layer, and LER
/// the layer's own assessment, immediately before and after that layer's
/// step, on the layer's cached input.
class StackedLearner : public LearningMachine {
 public:
  StackedLearner(std::vector<std::unique_ptr<LearningMachine>> layers, Criterion global,
                 StepOrder order = StepOrder::StepXFirst);
  StackedLearner(const StackedLearner& other);
  StackedLearner& operator=(const StackedLearner&) = delete;

  IO forward(const IO& x, State& state, bool release = true) override;
  IO infer(const IO& x) const override;
  kaku::Assessment assess_y(const IO& y, const IO& t) const override { return global_.assess(y, t); }

  void step(const IO& x, const IO& t, State& state) override;
  /// Target for whatever feeds the stack. Requires step() first.
  IO step_x(const IO& x, const IO& t, State& state) override;

  /// forward + step with a fresh State.
  StepMetrics train_step(const IO& x, const IO& t);
  /// Same, using the caller's State so intermediate IOs stay inspectable.
  StepMetrics train_step(const IO& x, const IO& t, State& state);

  void set_mode(Mode mode) override;
  void set_epoch(int epoch) override;
  void set_diagnostics(bool on) noexcept { diagnostics_ = on; }
  bool diagnostics() const noexcept { return diagnostics_; }
  StepOrder order() const noexcept { return order_; }

  std::vector<Param*> params() override;
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<StackedLearner>(*this); }
  std::string name() const override { return "StackedLearner"; }

  std::size_t size() const noexcept { return layers_.size(); }
  LearningMachine& layer(std::size_t i) { return *layers_.at(i); }
  const LearningMachine& layer(std::size_t i) const { return *layers_.at(i); }
  const Criterion& global_criterion() const noexcept { return global_; }

  /// Input of layer i (i == size() gives the output) recorded by forward.
  static std::string io_key(std::size_t i) { return "io/" + std::to_string(i); }
  /// Target handed to layer i during step.
  static std::string target_key(std::size_t i) { return "target/" + std::to_string(i); }

  /// Forward from layer `from` to the output without side effects.
  IO infer_from(std::size_t from, const IO& x) const;

 private:
  void link();

  std::vector<std::unique_ptr<LearningMachine>> layers_;
  Criterion global_;
  StepOrder order_;
  bool diagnostics_ = false;
  StepMetrics last_metrics_;
};

}  // namespace lamina::kikai
