#include "lamina/kikai/target_prop.hpp"

#include "lamina/errors.hpp"

namespace lamina::kikai {

namespace {
constexpr const char* kY = "y";
}

TargetPropLearner::TargetPropLearner(layers::Sequential forward_block, Criterion criterion, Optimizer optimizer,
                                     layers::Sequential reverse_block, Optimizer reverse_optimizer, bool alternate)
    : forward_(std::move(forward_block)),
      criterion_(criterion),
      optimizer_(std::move(optimizer)),
      reverse_(std::move(reverse_block), Criterion::mse(), std::move(reverse_optimizer)),
      alternate_(alternate) {}

void TargetPropLearner::set_mode(Mode mode) {
  LearningMachine::set_mode(mode);
  reverse_.set_mode(mode);
}

IO TargetPropLearner::forward(const IO& x, State& state, bool) {
  IO y(forward_.forward(x.f(), mode_));
  state.store(this, x, kY, y);
  last_forward_ = x.id();
  return y;
}

IO TargetPropLearner::infer(const IO& x) const { return IO(forward_.infer(x.f(), mode_)); }

TrainPhase TargetPropLearner::phase_for(int epoch) const noexcept {
  if (!alternate_) return TrainPhase::Both;
  return epoch % 2 != 0 ? TrainPhase::Reverse : TrainPhase::Forward;
}

void TargetPropLearner::train_tick(const IO& x, const IO& y, const IO& t, int epoch) {
  const TrainPhase phase = phase_for(epoch);
  if (phase != TrainPhase::Reverse) {
    forward_.backward(criterion_.grad(y.f(), t.f()));
    auto p = forward_.params();
    optimizer_.step(p);
  }
  if (phase != TrainPhase::Forward) {
    // The reverse block only ever sees this step's (y, x) pair.
    State local;
    const IO y_in(y.f());
    const IO recon = reverse_.forward(y_in, local);
    last_reverse_loss_ = reverse_.assess_y(recon, x).value();
    reverse_.step(y_in, x, local);
  }
}

void TargetPropLearner::step(const IO& x, const IO& t, State& state) {
  if (last_forward_ != x.id() || !state.contains(this, x, kY)) {
    throw OrderingError("TargetPropLearner: forward(x) must run before step");
  }
  train_tick(x, state.fetch<IO>(this, x, kY), t, epoch_);
  kaku::mark_stepped(state, this, x);
}

IO TargetPropLearner::step_x(const IO& /*x*/, const IO& t, State& /*state*/) {
  return IO(reverse_.module().infer(t.f(), Mode::Eval));
}

std::vector<Param*> TargetPropLearner::params() {
  auto p = forward_.params();
  auto r = reverse_.params();
  p.insert(p.end(), r.begin(), r.end());
  return p;
}

}  // namespace lamina::kikai
