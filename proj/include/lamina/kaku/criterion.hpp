#pragma once

#include "lamina/kaku/assessment.hpp"
#include "lamina/kaku/io.hpp"
#include "lamina/matrix.hpp"

namespace lamina::kaku {

enum class LossKind { SSE, MSE, CrossEntropy };
enum class Reduction { Sum, Mean, None };

/// Loss over a minibatch.
///
/// Per sample: SSE is weight·Σⱼ(y−t)², MSE is weight·meanⱼ(y−t)², CrossEntropy
/// is weight·(−log softmax(y)[t]) with t a [b, 1] column of class indices.
/// Sum and Mean reduce over the batch. None keeps per-element values (per
/// sample for CrossEntropy); the scalar loss is then their mean.
struct Criterion {
  LossKind kind = LossKind::SSE;
  Reduction reduction = Reduction::Sum;
  double weight = 1.0;

  static Criterion sse(double weight = 0.5, Reduction r = Reduction::Sum) { return {LossKind::SSE, r, weight}; }
  static Criterion mse(Reduction r = Reduction::Mean) { return {LossKind::MSE, r, 1.0}; }
  static Criterion cross_entropy(Reduction r = Reduction::Mean) { return {LossKind::CrossEntropy, r, 1.0}; }

  double loss(const Matrix& y, const Matrix& t) const;
  /// Unreduced values; per element for SSE/MSE, [b, 1] for CrossEntropy.
  Matrix unreduced(const Matrix& y, const Matrix& t) const;
  /// ∂loss/∂y. For Reduction::None this is the gradient of the unreduced sum.
  Matrix grad(const Matrix& y, const Matrix& t) const;

  Assessment assess(const IO& y, const IO& t) const { return Assessment(loss(y.f(), t.f()), false); }
};

}  // namespace lamina::kaku
