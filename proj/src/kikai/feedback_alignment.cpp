#include "lamina/kikai/feedback_alignment.hpp"

#include <cmath>

#include "lamina/errors.hpp"

namespace lamina::kikai {

namespace {
constexpr const char* kY = "y";
constexpr const char* kZ = "z";
constexpr const char* kDz = "dz";
constexpr const char* kDx = "dx";
constexpr const char* kAccumulated = "accumulated";
constexpr const char* kIOs = "io/";
}  // namespace

Matrix random_feedback(Rng& rng, std::size_t rows, std::size_t cols, std::size_t fan_in) {
  return gaussian(rng, rows, cols, 0.0, 1.0 / std::sqrt(static_cast<double>(fan_in)));
}

// --- FALearner ---------------------------------------------------------------

FALearner::FALearner(layers::Linear linear, bool relu, Criterion criterion, Optimizer optimizer, Rng& feedback_rng)
    : FALearner(linear, relu, criterion, optimizer,
                random_feedback(feedback_rng, linear.in_features(), linear.out_features(), linear.in_features())) {}

FALearner::FALearner(layers::Linear linear, bool relu, Criterion criterion, Optimizer optimizer, Matrix feedback)
    : linear_(std::move(linear)),
      relu_(relu),
      criterion_(criterion),
      optimizer_(std::move(optimizer)),
      feedback_(std::move(feedback)) {
  if (feedback_.rows() != linear_.in_features() || feedback_.cols() != linear_.out_features()) {
    throw ShapeError("FALearner: feedback " + feedback_.shape_str() + " must be [in, out] = [" +
                     std::to_string(linear_.in_features()) + ", " + std::to_string(linear_.out_features()) + "]");
  }
}

IO FALearner::forward(const IO& x, State& state, bool) {
  Matrix z = linear_.forward(x.f(), mode_);
  Matrix y = z;
  if (relu_)
    for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
  IO out(std::move(y));
  state.store(this, x, kZ, std::move(z));
  state.store(this, x, kY, out);
  last_forward_ = x.id();
  return out;
}

IO FALearner::infer(const IO& x) const {
  Matrix y = linear_.infer(x.f(), mode_);
  if (relu_)
    for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
  return IO(std::move(y));
}

void FALearner::require_forward(const IO& x, const State& state) const {
  if (last_forward_ != x.id() || !state.contains(this, x, kZ)) {
    throw OrderingError("FALearner: forward(x) must run first for this input");
  }
}

void FALearner::accumulate_delta(const IO& x, const Matrix& delta_y, State& state) {
  require_forward(x, state);
  const Matrix& z = state.fetch<Matrix>(this, x, kZ);
  require_same_shape(delta_y, z, "FALearner delta");
  Matrix dz = delta_y;
  if (relu_)
    for (std::size_t i = 0; i < dz.size(); ++i)
      if (!(z.data()[i] > 0.0)) dz.data()[i] = 0.0;
  linear_.backward(dz);
  state.store(this, x, kDz, std::move(dz));
  state.store(this, x, kAccumulated, true);
}

void FALearner::accumulate(const IO& x, const IO& t, State& state) {
  require_forward(x, state);
  accumulate_delta(x, criterion_.grad(state.fetch<IO>(this, x, kY).f(), t.f()), state);
}

void FALearner::step(const IO& x, const IO& t, State& state) {
  if (!state.contains(this, x, kAccumulated)) accumulate(x, t, state);
  auto p = params();
  optimizer_.step(p);
  state.erase(this, x.id(), kAccumulated);
  kaku::mark_stepped(state, this, x);
}

IO FALearner::step_x(const IO& x, const IO& t, State& state) {
  require_forward(x, state);
  if (!state.contains(this, x, kDz)) accumulate(x, t, state);
  return IO(x.f() - matmul_nt(state.fetch<Matrix>(this, x, kDz), feedback_));
}

// --- DFALearner --------------------------------------------------------------

DFALearner::DFALearner(layers::Sequential block, std::size_t output_width, Optimizer optimizer, Rng& feedback_rng)
    : block_(std::move(block)), optimizer_(std::move(optimizer)) {
  auto p = block_.params();
  if (p.empty()) throw ConfigError("DFALearner: block has no parameters");
  // The first parameter is the leading Linear weight [out, in]; the block's
  // output width is the last layer's width, found by a probe forward.
  const std::size_t in = p.front()->value.cols();
  const std::size_t width = block_.infer(Matrix(2, in), Mode::Eval).cols();
  feedback_ = random_feedback(feedback_rng, width, output_width, output_width);
}

DFALearner::DFALearner(layers::Sequential block, Optimizer optimizer, Matrix feedback)
    : block_(std::move(block)), optimizer_(std::move(optimizer)), feedback_(std::move(feedback)) {}

IO DFALearner::forward(const IO& x, State& state, bool) {
  IO y(block_.forward(x.f(), mode_));
  state.store(this, x, kY, y);
  last_forward_ = x.id();
  return y;
}

IO DFALearner::infer(const IO& x) const { return IO(block_.infer(x.f(), mode_)); }

void DFALearner::accumulate_global(const IO& x, const Matrix& global_error, State& state) {
  if (last_forward_ != x.id() || !state.contains(this, x, kY)) {
    throw OrderingError("DFALearner: forward(x) must run first for this input");
  }
  if (global_error.cols() != feedback_.cols()) {
    throw ShapeError("DFALearner: global error " + global_error.shape_str() + " has width " +
                     std::to_string(global_error.cols()) + ", feedback expects " + std::to_string(feedback_.cols()));
  }
  const IO& y = state.fetch<IO>(this, x, kY);
  const Matrix delta = matmul_nt(global_error, feedback_);
  require_same_shape(delta, y.f(), "DFALearner projected error");
  state.store(this, x, kDx, block_.backward(delta));
  state.store(this, x, kAccumulated, true);
}

void DFALearner::step(const IO& x, const IO& /*t*/, State& state) {
  if (!state.contains(this, x, kAccumulated)) {
    throw OrderingError("DFALearner: step needs accumulate_global first");
  }
  auto p = params();
  optimizer_.step(p);
  state.erase(this, x.id(), kAccumulated);
  kaku::mark_stepped(state, this, x);
}

IO DFALearner::step_x(const IO& x, const IO& /*t*/, State& state) {
  if (!state.contains(this, x, kDx)) throw OrderingError("DFALearner: step_x needs accumulate_global first");
  return IO(x.f() - state.fetch<Matrix>(this, x, kDx));
}

// --- DFANetwork --------------------------------------------------------------

DFANetwork::DFANetwork(std::vector<DFALearner> hidden, FALearner output)
    : hidden_(std::move(hidden)), output_(std::move(output)) {}

DFANetwork::DFANetwork(const DFANetwork& other)
    : LearningMachine(other), hidden_(other.hidden_), output_(other.output_) {}

void DFANetwork::set_mode(Mode mode) {
  LearningMachine::set_mode(mode);
  for (auto& h : hidden_) h.set_mode(mode);
  output_.set_mode(mode);
}

IO DFANetwork::forward(const IO& x, State& state, bool) {
  IO h = x;
  for (std::size_t i = 0; i < hidden_.size(); ++i) {
    state.store(this, x, kIOs + std::to_string(i), h);
    h = hidden_[i].forward(h, state);
  }
  state.store(this, x, kIOs + std::to_string(hidden_.size()), h);
  IO y = output_.forward(h, state);
  state.store(this, x, kY, y);
  return y;
}

IO DFANetwork::infer(const IO& x) const {
  IO h = x;
  for (const auto& layer : hidden_) h = layer.infer(h);
  return output_.infer(h);
}

void DFANetwork::step(const IO& x, const IO& t, State& state) {
  if (!state.contains(this, x, kY)) throw OrderingError("DFANetwork: forward(x) must run before step");
  const IO& y = state.fetch<IO>(this, x, kY);
  const IO& top_in = state.fetch<IO>(this, x, kIOs + std::to_string(hidden_.size()));
  // Global error: gradient of the output criterion at the network output.
  const Matrix global_error = output_.criterion().grad(y.f(), t.f());
  output_.accumulate(top_in, t, state);
  output_.step(top_in, t, state);
  for (std::size_t i = hidden_.size(); i-- > 0;) {
    const IO& in = state.fetch<IO>(this, x, kIOs + std::to_string(i));
    hidden_[i].accumulate_global(in, global_error, state);
    hidden_[i].step(in, t, state);
  }
  kaku::mark_stepped(state, this, x);
}

IO DFANetwork::step_x(const IO& x, const IO& t, State& state) {
  kaku::require_stepped(state, this, x);
  if (hidden_.empty()) return output_.step_x(x, t, state);
  return hidden_.front().step_x(x, t, state);
}

std::vector<Param*> DFANetwork::params() {
  std::vector<Param*> out;
  for (auto& h : hidden_) {
    auto p = h.params();
    out.insert(out.end(), p.begin(), p.end());
  }
  auto p = output_.params();
  out.insert(out.end(), p.begin(), p.end());
  return out;
}

}  // namespace lamina::kikai
