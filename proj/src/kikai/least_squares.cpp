#include "lamina/kikai/least_squares.hpp"

#include "lamina/errors.hpp"
#include "lamina/linalg.hpp"

namespace lamina::kikai {

namespace {
constexpr const char* kY = "y";
constexpr const char* kZ = "z";
constexpr const char* kW = "W";
constexpr const char* kDz = "dz";
constexpr const char* kAccumulated = "accumulated";
}  // namespace

Matrix ridge_input_target(const Matrix& weight, const Matrix& x, const Matrix& z, const Matrix& z_target,
                          double lambda) {
  require_same_shape(z, z_target, "ridge input target");
  if (weight.rows() != z.cols() || weight.cols() != x.cols() || x.rows() != z.rows()) {
    throw ShapeError("ridge input target: weight " + weight.shape_str() + ", x " + x.shape_str() + ", z " +
                     z.shape_str());
  }
  // Δx·Wᵀ ≈ R  ⇔  W·Δxᵀ ≈ Rᵀ, a ridge problem in Δxᵀ.
  const Matrix delta_t = ridge_solve(weight, transpose(z_target - z), lambda);
  return x + transpose(delta_t);
}

IO LeastSquaresStepX::step_x(const IO& x, const IO& t) const {
  if (!layer_->cached_input()) throw OrderingError("LeastSquaresStepX: the layer has not run forward");
  const Matrix z = layer_->infer(x.f(), kaku::Mode::Eval);
  return IO(ridge_input_target(layer_->weight().value, x.f(), z, t.f(), lambda_));
}

LeastSquaresLearner::LeastSquaresLearner(layers::Linear linear, layers::Sequential post, Criterion criterion,
                                         Optimizer optimizer, double lambda)
    : linear_(std::move(linear)),
      post_(std::move(post)),
      criterion_(criterion),
      optimizer_(std::move(optimizer)),
      lambda_(lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("LeastSquaresLearner: lambda must be non-negative");
}

IO LeastSquaresLearner::forward(const IO& x, State& state, bool) {
  Matrix z = linear_.forward(x.f(), mode_);
  IO y(post_.forward(z, mode_));
  state.store(this, x, kZ, std::move(z));
  state.store(this, x, kW, linear_.weight().value);
  state.store(this, x, kY, y);
  last_forward_ = x.id();
  return y;
}

IO LeastSquaresLearner::infer(const IO& x) const { return IO(post_.infer(linear_.infer(x.f(), mode_), mode_)); }

void LeastSquaresLearner::require_forward(const IO& x, const State& state) const {
  if (last_forward_ != x.id() || !state.contains(this, x, kY)) {
    throw OrderingError("LeastSquaresLearner: forward(x) must run first for this input");
  }
}

void LeastSquaresLearner::accumulate(const IO& x, const IO& t, State& state) {
  require_forward(x, state);
  const IO& y = state.fetch<IO>(this, x, kY);
  Matrix dz = post_.backward(criterion_.grad(y.f(), t.f()));
  linear_.backward(dz);
  state.store(this, x, kDz, std::move(dz));
  state.store(this, x, kAccumulated, true);
}

void LeastSquaresLearner::step(const IO& x, const IO& t, State& state) {
  if (!state.contains(this, x, kAccumulated)) accumulate(x, t, state);
  auto p = params();
  optimizer_.step(p);
  state.erase(this, x.id(), kAccumulated);
  kaku::mark_stepped(state, this, x);
}

IO LeastSquaresLearner::step_x(const IO& x, const IO& t, State& state) {
  require_forward(x, state);
  if (!state.contains(this, x, kDz)) accumulate(x, t, state);
  const Matrix& z = state.fetch<Matrix>(this, x, kZ);
  const Matrix z_target = z - state.fetch<Matrix>(this, x, kDz);
  return IO(ridge_input_target(state.fetch<Matrix>(this, x, kW), x.f(), z, z_target, lambda_));
}

std::vector<Param*> LeastSquaresLearner::params() {
  std::vector<Param*> p = linear_.params();
  auto rest = post_.params();
  p.insert(p.end(), rest.begin(), rest.end());
  return p;
}

}  // namespace lamina::kikai
