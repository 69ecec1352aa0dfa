#include "lamina/kikai/epoch_gate.hpp"

#include "lamina/errors.hpp"

namespace lamina::kikai {

EpochGate::EpochGate(std::unique_ptr<LearningMachine> inner, bool odd, bool even)
    : inner_(std::move(inner)), odd_(odd), even_(even) {
  if (!inner_) throw ConfigError("EpochGate: no machine to wrap");
}

EpochGate::EpochGate(const EpochGate& other)
    : LearningMachine(other), inner_(other.inner_->clone()), odd_(other.odd_), even_(other.even_), epoch_(other.epoch_) {}

void EpochGate::accumulate(const IO& x, const IO& t, State& state) {
  if (active()) inner_->accumulate(x, t, state);
}

void EpochGate::step(const IO& x, const IO& t, State& state) {
  if (active()) inner_->step(x, t, state);
  kaku::mark_stepped(state, this, x);
}

void EpochGate::set_mode(Mode mode) {
  LearningMachine::set_mode(mode);
  inner_->set_mode(mode);
}

void EpochGate::set_epoch(int epoch) {
  epoch_ = epoch;
  inner_->set_epoch(epoch);
}

}  // namespace lamina::kikai
