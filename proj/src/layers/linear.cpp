#include "lamina/layers/linear.hpp"

#include <cmath>

#include "lamina/errors.hpp"

namespace lamina::layers {

Linear::Linear(std::size_t in, std::size_t out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(in));
  weight_ = Param(uniform_matrix(rng, out, in, -bound, bound));
  bias_ = Param(Matrix(1, out));
}

Linear::Linear(Matrix weight, Matrix bias) : weight_(std::move(weight)), bias_(std::move(bias)) {
  if (bias_.value.rows() != 1 || bias_.value.cols() != weight_.value.rows()) {
    throw ShapeError("Linear: bias " + bias_.value.shape_str() + " does not fit weight " + weight_.value.shape_str());
  }
}

Matrix Linear::infer(const Matrix& x, Mode, Rng*) const {
  if (x.cols() != in_features()) {
    throw ShapeError("Linear: input " + x.shape_str() + " does not match weight " + weight_.value.shape_str());
  }
  return add_row_broadcast(matmul_nt(x, weight_.value), bias_.value);
}

Matrix Linear::forward(const Matrix& x, Mode mode) {
  Matrix y = infer(x, mode);
  input_ = x;
  return y;
}

Matrix Linear::backward(const Matrix& upstream) {
  if (!input_) throw OrderingError("Linear: backward called before forward");
  if (upstream.rows() != input_->rows() || upstream.cols() != out_features()) {
    throw ShapeError("Linear: upstream gradient " + upstream.shape_str() + " does not match output [" +
                     std::to_string(input_->rows()) + ", " + std::to_string(out_features()) + "]");
  }
  weight_.grad += matmul_tn(upstream, *input_);
  bias_.grad += sum_rows(upstream);
  return matmul(upstream, weight_.value);
}

}  // namespace lamina::layers
