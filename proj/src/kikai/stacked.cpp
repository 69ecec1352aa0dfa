#include "lamina/kikai/stacked.hpp"

#include <cmath>
#include <limits>

#include "lamina/errors.hpp"

namespace lamina::kikai {

namespace {
constexpr const char* kFirstTarget = "t1";
}

StackedLearner::StackedLearner(std::vector<std::unique_ptr<LearningMachine>> layers, Criterion global,
                               StepOrder order)
    : layers_(std::move(layers)), global_(global), order_(order) {
  if (layers_.empty()) throw ConfigError("StackedLearner: needs at least one layer");
  link();
}

void StackedLearner::link() {
  for (std::size_t i = 1; i < layers_.size(); ++i) layers_[i]->set_predecessor(layers_[i - 1].get());
}

StackedLearner::StackedLearner(const StackedLearner& other)
    : LearningMachine(other), global_(other.global_), order_(other.order_), diagnostics_(other.diagnostics_) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
  link();
}

void StackedLearner::set_mode(Mode mode) {
  LearningMachine::set_mode(mode);
  for (auto& l : layers_) l->set_mode(mode);
}

void StackedLearner::set_epoch(int epoch) {
  for (auto& l : layers_) l->set_epoch(epoch);
}

IO StackedLearner::forward(const IO& x, State& state, bool) {
  IO h = x;
  for (std::size_t i = 0; i < layers_.size(); ++i) {
    state.store(this, x, io_key(i), h);
    IO next = layers_[i]->forward(h, state);
    state.store(layers_[i].get(), next, kaku::kSourceKey, h);
    h = std::move(next);
  }
  state.store(this, x, io_key(layers_.size()), h);
  return h;
}

IO StackedLearner::infer_from(std::size_t from, const IO& x) const {
  IO h = x;
  for (std::size_t i = from; i < layers_.size(); ++i) h = layers_[i]->infer(h);
  return h;
}

IO StackedLearner::infer(const IO& x) const { return infer_from(0, x); }

void StackedLearner::step(const IO& x, const IO& t, State& state) {
  const std::size_t n = layers_.size();
  if (!state.contains(this, x, io_key(n))) throw OrderingError("StackedLearner: forward(x) must run before step");

  StepMetrics metrics;
  metrics.loss = global_.loss(state.fetch<IO>(this, x, io_key(n)).f(), t.f());
  metrics.mad.assign(n, std::numeric_limits<double>::quiet_NaN());
  if (diagnostics_) {
    metrics.ger.assign(n, 0.0);
    metrics.ler.assign(n, 0.0);
  }

  IO target = t;
  for (std::size_t i = n; i-- > 0;) {
    LearningMachine& layer = *layers_[i];
    const IO input = state.fetch<IO>(this, x, io_key(i));
    const IO& output = state.fetch<IO>(this, x, io_key(i + 1));
    state.store(this, x, target_key(i), target);
    if (output.f().same_shape(target.f())) {
      double mad = 0.0;
      for (std::size_t k = 0; k < output.f().size(); ++k) mad += std::abs(target.f().data()[k] - output.f().data()[k]);
      metrics.mad[i] = output.f().empty() ? 0.0 : mad / static_cast<double>(output.f().size());
    }

    double global_before = 0.0, local_before = 0.0;
    if (diagnostics_) {
      global_before = global_.loss(infer_from(i, input).f(), t.f());
      local_before = layer.assess_y(layer.infer(input), target).value();
    }

    if (layer.has_accumulate()) layer.accumulate(input, target, state);
    std::optional<IO> next_target;
    if (order_ == StepOrder::StepXFirst) {
      if (i > 0) {
        next_target = layer.step_x(input, target, state);
        ++metrics.step_x_calls;
      }
      layer.step(input, target, state);
    } else {
      layer.step(input, target, state);
      if (i > 0) {
        next_target = layer.step_x(input, target, state);
        ++metrics.step_x_calls;
      }
    }

    if (diagnostics_) {
      metrics.ger[i] = global_before - global_.loss(infer_from(i, input).f(), t.f());
      metrics.ler[i] = local_before - layer.assess_y(layer.infer(input), target).value();
    }
    if (next_target) target = std::move(*next_target);
  }
  state.store(this, x, kFirstTarget, state.fetch<IO>(this, x, target_key(0)));
  kaku::mark_stepped(state, this, x);
  last_metrics_ = std::move(metrics);
}

IO StackedLearner::step_x(const IO& x, const IO& /*t*/, State& state) {
  kaku::require_stepped(state, this, x);
  return layers_.front()->step_x(x, state.fetch<IO>(this, x, kFirstTarget), state);
}

StepMetrics StackedLearner::train_step(const IO& x, const IO& t) {
  State state;
  return train_step(x, t, state);
}

StepMetrics StackedLearner::train_step(const IO& x, const IO& t, State& state) {
  forward(x, state);
  step(x, t, state);
  return last_metrics_;
}

std::vector<Param*> StackedLearner::params() {
  std::vector<Param*> out;
  for (auto& l : layers_) {
    auto p = l->params();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

}  // namespace lamina::kikai
