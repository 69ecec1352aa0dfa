#pragma once

#include <memory>

#include "lamina/kaku/machine.hpp"

namespace lamina::kikai {

using kaku::Assessment;
using kaku::IO;
using kaku::LearningMachine;
using kaku::Mode;
using kaku::Param;
using kaku::State;

/// Wraps a machine so that its parameters only train in some epochs: odd
/// epochs, even epochs, or both. Outside them step() only records that it
/// ran. Everything else, step_x included, is delegated.
///
/// Lets a whole stack follow the forward/reverse alternation of its
/// reconstruction layers.
class EpochGate : public LearningMachine {
 public:
  EpochGate(std::unique_ptr<LearningMachine> inner, bool odd, bool even);
  EpochGate(const EpochGate& other);
  EpochGate& operator=(const EpochGate&) = delete;

  IO forward(const IO& x, State& state, bool release = true) override { return inner_->forward(x, state, release); }
  IO infer(const IO& x) const override { return inner_->infer(x); }
  IO sample(const IO& x, Rng& rng) const override { return inner_->sample(x, rng); }
  Assessment assess_y(const IO& y, const IO& t) const override { return inner_->assess_y(y, t); }

  bool has_accumulate() const override { return inner_->has_accumulate(); }
  void accumulate(const IO& x, const IO& t, State& state) override;
  void step(const IO& x, const IO& t, State& state) override;
  IO step_x(const IO& x, const IO& t, State& state) override { return inner_->step_x(x, t, state); }

  void set_mode(Mode mode) override;
  void set_epoch(int epoch) override;
  void set_predecessor(const LearningMachine* predecessor) override { inner_->set_predecessor(predecessor); }

  std::vector<Param*> params() override { return inner_->params(); }
  std::unique_ptr<LearningMachine> clone() const override { return std::make_unique<EpochGate>(*this); }
  std::string name() const override { return "EpochGate(" + inner_->name() + ")"; }

  bool active() const noexcept { return epoch_ % 2 != 0 ? odd_ : even_; }
  LearningMachine& inner() noexcept { return *inner_; }

 private:
  std::unique_ptr<LearningMachine> inner_;
  bool odd_;
  bool even_;
  int epoch_ = 1;
};

}  // namespace lamina::kikai
