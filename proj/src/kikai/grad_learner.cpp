#include "lamina/kikai/grad_learner.hpp"

#include "lamina/errors.hpp"

namespace lamina::kikai {

namespace {
constexpr const char* kY = "y";
constexpr const char* kDx = "dx";
constexpr const char* kAccumulated = "accumulated";
}  // namespace

GradLearner::GradLearner(layers::Sequential module, Criterion criterion, Optimizer optimizer, XUpdate x_update)
    : module_(std::move(module)), criterion_(criterion), optimizer_(std::move(optimizer)), x_update_(x_update) {
  if (x_update_.iterations < 1) throw ConfigError("GradLearner: x update needs at least one iteration");
}

IO GradLearner::forward(const IO& x, State& state, bool) {
  IO y(module_.forward(x.f(), mode_));
  state.store(this, x, kY, y);
  last_forward_ = x.id();
  return y;
}

IO GradLearner::infer(const IO& x) const { return IO(module_.infer(x.f(), mode_)); }

IO GradLearner::sample(const IO& x, Rng& rng) const { return IO(module_.infer(x.f(), mode_, &rng)); }

void GradLearner::require_forward(const IO& x, const State& state) const {
  if (last_forward_ != x.id() || !state.contains(this, x, kY)) {
    throw OrderingError("GradLearner: forward(x) must run before accumulate/step/step_x for this input");
  }
}

void GradLearner::accumulate(const IO& x, const IO& t, State& state) {
  require_forward(x, state);
  const IO& y = state.fetch<IO>(this, x, kY);
  Matrix dx = module_.backward(criterion_.grad(y.f(), t.f()));
  state.store(this, x, kDx, std::move(dx));
  state.store(this, x, kAccumulated, true);
}

void GradLearner::step(const IO& x, const IO& t, State& state) {
  if (!state.contains(this, x, kAccumulated)) accumulate(x, t, state);
  auto p = module_.params();
  optimizer_.step(p);
  state.erase(this, x.id(), kAccumulated);
  kaku::mark_stepped(state, this, x);
}

IO GradLearner::step_x(const IO& x, const IO& t, State& state) {
  require_forward(x, state);
  const bool plain = x_update_.iterations == 1 && !x_update_.criterion;
  if (plain) {
    if (!state.contains(this, x, kDx)) accumulate(x, t, state);
    return IO(x.f() - state.fetch<Matrix>(this, x, kDx) * x_update_.step_size);
  }
  // Iterative descent on a scratch copy so caches and gradient buffers of the
  // live module stay untouched.
  const Criterion& crit = x_update_.criterion ? *x_update_.criterion : criterion_;
  layers::Sequential scratch = module_;
  Matrix working = x.f();
  for (int k = 0; k < x_update_.iterations; ++k) {
    const Matrix y = scratch.forward(working, mode_);
    working -= scratch.backward(crit.grad(y, t.f())) * x_update_.step_size;
  }
  return IO(std::move(working));
}

}  // namespace lamina::kikai
