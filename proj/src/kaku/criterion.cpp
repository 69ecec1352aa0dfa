#include "lamina/kaku/criterion.hpp"

#include "lamina/errors.hpp"
#include "lamina/linalg.hpp"

namespace lamina::kaku {

namespace {

void check_regression(const Matrix& y, const Matrix& t) { require_same_shape(y, t, "criterion"); }

double batch_divisor(Reduction r, const Matrix& y) {
  return r == Reduction::Mean ? static_cast<double>(y.rows()) : 1.0;
}

}  // namespace

Matrix Criterion::unreduced(const Matrix& y, const Matrix& t) const {
  if (kind == LossKind::CrossEntropy) {
    const auto labels = labels_from_column(t);
    return cross_entropy_per_sample(y, labels) * weight;
  }
  check_regression(y, t);
  Matrix out = y - t;
  for (double& v : out.data()) v = weight * v * v;
  return out;
}

double Criterion::loss(const Matrix& y, const Matrix& t) const {
  const Matrix u = unreduced(y, t);
  if (reduction == Reduction::None) return u.empty() ? 0.0 : sum(u) / static_cast<double>(u.size());
  double total = sum(u);
  if (kind == LossKind::MSE && y.cols() > 0) total /= static_cast<double>(y.cols());
  return total / batch_divisor(reduction, y);
}

Matrix Criterion::grad(const Matrix& y, const Matrix& t) const {
  if (kind == LossKind::CrossEntropy) {
    const auto labels = labels_from_column(t);
    if (labels.size() != y.rows()) {
      throw ShapeError("criterion: labels " + t.shape_str() + " do not match outputs " + y.shape_str());
    }
    Matrix g = softmax(y);
    for (std::size_t i = 0; i < g.rows(); ++i) {
      if (labels[i] >= g.cols()) throw IndexError("criterion: label out of range");
      g(i, labels[i]) -= 1.0;
    }
    const double div = reduction == Reduction::Mean ? static_cast<double>(y.rows()) : 1.0;
    return g * (weight / div);
  }
  check_regression(y, t);
  double scale = 2.0 * weight;
  if (reduction != Reduction::None) {
    if (kind == LossKind::MSE && y.cols() > 0) scale /= static_cast<double>(y.cols());
    scale /= batch_divisor(reduction, y);
  }
  return (y - t) * scale;
}

}  // namespace lamina::kaku
