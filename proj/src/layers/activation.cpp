#include "lamina/layers/activation.hpp"

#include "lamina/errors.hpp"

namespace lamina::layers {

Matrix Relu::infer(const Matrix& x, Mode, Rng*) const {
  Matrix y = x;
  for (double& v : y.data()) v = v > 0.0 ? v : 0.0;
  return y;
}

Matrix Relu::forward(const Matrix& x, Mode mode) {
  Matrix mask(x.rows(), x.cols());
  for (std::size_t i = 0; i < x.size(); ++i) mask.data()[i] = x.data()[i] > 0.0 ? 1.0 : 0.0;
  mask_ = std::move(mask);
  return infer(x, mode);
}

Matrix Relu::backward(const Matrix& upstream) {
  if (!mask_) throw OrderingError("ReLU: backward called before forward");
  require_same_shape(upstream, *mask_, "ReLU backward");
  return hadamard(upstream, *mask_);
}

}  // namespace lamina::layers
