#include "lamina/layers/batch_norm.hpp"

#include <cmath>

#include "lamina/errors.hpp"

namespace lamina::layers {

BatchNorm1d::BatchNorm1d(std::size_t features, double momentum, double eps)
    : gamma_(Matrix(1, features, 1.0)),
      beta_(Matrix(1, features, 0.0)),
      running_mean_(1, features, 0.0),
      running_var_(1, features, 1.0),
      momentum_(momentum),
      eps_(eps) {}

BatchNorm1d::Cache BatchNorm1d::normalize(const Matrix& x, Mode mode) const {
  if (x.cols() != features()) {
    throw ShapeError("BatchNorm1d: input " + x.shape_str() + " for " + std::to_string(features()) + " features");
  }
  Matrix mean = running_mean_;
  Matrix var = running_var_;
  if (mode == Mode::Train) {
    if (x.rows() == 0) throw EmptyInputError("BatchNorm1d: empty batch in train mode");
    mean = mean_rows(x);
    var = Matrix(1, x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i)
      for (std::size_t j = 0; j < x.cols(); ++j) {
        const double d = x(i, j) - mean(0, j);
        var(0, j) += d * d;
      }
    var *= 1.0 / static_cast<double>(x.rows());
  }
  Matrix inv_std(1, x.cols());
  for (std::size_t j = 0; j < x.cols(); ++j) inv_std(0, j) = 1.0 / std::sqrt(var(0, j) + eps_);
  Matrix x_hat = x;
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) x_hat(i, j) = (x(i, j) - mean(0, j)) * inv_std(0, j);
  return {mode, std::move(x_hat), std::move(inv_std), std::move(mean), std::move(var)};
}

Matrix BatchNorm1d::infer(const Matrix& x, Mode mode, Rng*) const {
  Matrix y = normalize(x, mode).x_hat;
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) = gamma_.value(0, j) * y(i, j) + beta_.value(0, j);
  return y;
}

Matrix BatchNorm1d::forward(const Matrix& x, Mode mode) {
  cache_ = normalize(x, mode);
  if (mode == Mode::Train) {
    const double n = static_cast<double>(x.rows());
    const double unbias = n > 1 ? n / (n - 1.0) : 1.0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      running_mean_(0, j) = (1.0 - momentum_) * running_mean_(0, j) + momentum_ * cache_->mean(0, j);
      running_var_(0, j) = (1.0 - momentum_) * running_var_(0, j) + momentum_ * cache_->var(0, j) * unbias;
    }
  }
  Matrix y = cache_->x_hat;
  for (std::size_t i = 0; i < y.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) = gamma_.value(0, j) * y(i, j) + beta_.value(0, j);
  return y;
}

Matrix BatchNorm1d::backward(const Matrix& upstream) {
  if (!cache_) throw OrderingError("BatchNorm1d: backward called before forward");
  const Matrix& x_hat = cache_->x_hat;
  require_same_shape(upstream, x_hat, "BatchNorm1d backward");
  const std::size_t b = x_hat.rows(), f = x_hat.cols();

  Matrix dgamma(1, f), dbeta(1, f);
  for (std::size_t i = 0; i < b; ++i)
    for (std::size_t j = 0; j < f; ++j) {
      dgamma(0, j) += upstream(i, j) * x_hat(i, j);
      dbeta(0, j) += upstream(i, j);
    }
  gamma_.grad += dgamma;
  beta_.grad += dbeta;

  Matrix dx(b, f);
  if (cache_->mode == Mode::Eval) {
    for (std::size_t i = 0; i < b; ++i)
      for (std::size_t j = 0; j < f; ++j) dx(i, j) = upstream(i, j) * gamma_.value(0, j) * cache_->inv_std(0, j);
    return dx;
  }
  // dx = inv_std/b · (b·dx̂ − Σdx̂ − x̂·Σ(dx̂⊙x̂)), with dx̂ = upstream⊙γ.
  const double n = static_cast<double>(b);
  for (std::size_t j = 0; j < f; ++j) {
    const double g = gamma_.value(0, j);
    const double sum_dxhat = dbeta(0, j) * g;
    const double sum_dxhat_xhat = dgamma(0, j) * g;
    const double scale = cache_->inv_std(0, j) / n;
    for (std::size_t i = 0; i < b; ++i) {
      const double dxhat = upstream(i, j) * g;
      dx(i, j) = scale * (n * dxhat - sum_dxhat - x_hat(i, j) * sum_dxhat_xhat);
    }
  }
  return dx;
}

}  // namespace lamina::layers
