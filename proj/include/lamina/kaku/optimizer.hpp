#pragma once

#include <span>
#include <string>
#include <vector>

#include "lamina/matrix.hpp"

namespace lamina::kaku {

/// A trainable tensor and its gradient accumulation buffer.
struct Param {
  Param() = default;
  explicit Param(Matrix v) : value(std::move(v)), grad(value.rows(), value.cols()) {}

  Matrix value;
  Matrix grad;

  void zero_grad() { grad = Matrix(value.rows(), value.cols()); }
};

enum class OptimizerKind { SGD, Adam };

class Optimizer {
 public:
  static Optimizer sgd(double lr) { return Optimizer(OptimizerKind::SGD, lr); }
  static Optimizer adam(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8) {
    Optimizer o(OptimizerKind::Adam, lr);
    o.beta1_ = beta1;
    o.beta2_ = beta2;
    o.eps_ = eps;
    return o;
  }

  OptimizerKind kind() const noexcept { return kind_; }
  double lr() const noexcept { return lr_; }
  void set_lr(double lr) noexcept { lr_ = lr; }
  long steps_taken() const noexcept { return t_; }

  /// Applies one update from each param's grad buffer, then zeroes the
  /// buffers. Adam moments are tracked per position in `params`, so the same
  /// list must be passed every call.
  void step(std::span<Param* const> params);

  /// Drops Adam moments and the step counter.
  void reset();

 private:
  Optimizer(OptimizerKind kind, double lr) : kind_(kind), lr_(lr) {}

  OptimizerKind kind_;
  double lr_;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double eps_ = 1e-8;
  long t_ = 0;
  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
};

}  // namespace lamina::kaku
