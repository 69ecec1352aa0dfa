#include "lamina/layers/dropout.hpp"

#include "lamina/errors.hpp"

namespace lamina::layers {

Dropout::Dropout(double p, Rng rng) : p_(0.0), rng_(rng) { set_p(p); }

void Dropout::set_p(double p) {
  if (!(p >= 0.0 && p < 1.0)) throw ConfigError("Dropout: p must lie in [0, 1), got " + std::to_string(p));
  p_ = p;
}

Matrix Dropout::draw_mask(std::size_t rows, std::size_t cols, Rng& rng) const {
  Matrix mask(rows, cols, 1.0);
  if (p_ == 0.0) return mask;
  const double keep_scale = 1.0 / (1.0 - p_);
  for (double& v : mask.data()) v = rng.uniform() < p_ ? 0.0 : keep_scale;
  return mask;
}

Matrix Dropout::infer(const Matrix& x, Mode mode, Rng* rng) const {
  if (mode == Mode::Eval) return x;
  Rng local = rng_;
  return hadamard(x, draw_mask(x.rows(), x.cols(), rng ? *rng : local));
}

Matrix Dropout::forward(const Matrix& x, Mode mode) {
  if (mode == Mode::Eval) {
    mask_ = Matrix(x.rows(), x.cols(), 1.0);
    return x;
  }
  mask_ = draw_mask(x.rows(), x.cols(), rng_);
  return hadamard(x, *mask_);
}

Matrix Dropout::backward(const Matrix& upstream) {
  if (!mask_) throw OrderingError("Dropout: backward called before forward");
  return hadamard(upstream, *mask_);
}

}  // namespace lamina::layers
