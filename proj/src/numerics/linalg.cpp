#include "lamina/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "lamina/errors.hpp"

namespace lamina {

Matrix cholesky(const Matrix& spd) {
  if (spd.rows() != spd.cols()) throw ShapeError("cholesky: matrix is not square " + spd.shape_str());
  const std::size_t n = spd.rows();
  Matrix l(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = spd(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    // Relative pivot floor: anything below this is numerically singular.
    if (!(d > 1e-14 * std::max(1.0, std::abs(spd(j, j))))) {
      throw SingularityError("cholesky: non-positive pivot at column " + std::to_string(j) +
                             "; the system is singular, use lambda > 0");
    }
    const double ljj = std::sqrt(d);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = spd(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / ljj;
    }
  }
  return l;
}

Matrix cholesky_solve(const Matrix& lower, const Matrix& rhs) {
  const std::size_t n = lower.rows();
  if (rhs.rows() != n) throw ShapeError("cholesky_solve: " + lower.shape_str() + " vs rhs " + rhs.shape_str());
  Matrix x = rhs;
  // Forward substitution L·y = rhs.
  for (std::size_t i = 0; i < n; ++i) {
    auto xi = x.row_span(i);
    for (std::size_t k = 0; k < i; ++k) {
      const double lik = lower(i, k);
      auto xk = x.row_span(k);
      for (std::size_t c = 0; c < x.cols(); ++c) xi[c] -= lik * xk[c];
    }
    for (double& v : xi) v /= lower(i, i);
  }
  // Back substitution Lᵀ·x = y.
  for (std::size_t ii = n; ii-- > 0;) {
    auto xi = x.row_span(ii);
    for (std::size_t k = ii + 1; k < n; ++k) {
      const double lki = lower(k, ii);
      auto xk = x.row_span(k);
      for (std::size_t c = 0; c < x.cols(); ++c) xi[c] -= lki * xk[c];
    }
    for (double& v : xi) v /= lower(ii, ii);
  }
  return x;
}

Matrix ridge_solve(const Matrix& a, const Matrix& b, double lambda) {
  if (!(lambda >= 0.0)) throw ConfigError("ridge_solve: lambda must be non-negative");
  if (a.rows() != b.rows()) {
    throw ShapeError("ridge_solve: a " + a.shape_str() + " and b " + b.shape_str() + " differ in rows");
  }
  Matrix normal = matmul_tn(a, a);
  for (std::size_t i = 0; i < normal.rows(); ++i) normal(i, i) += lambda;
  return cholesky_solve(cholesky(normal), matmul_tn(a, b));
}

Matrix softmax(const Matrix& logits) {
  Matrix p = logits;
  for (std::size_t i = 0; i < p.rows(); ++i) {
    auto r = p.row_span(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double z = 0.0;
    for (double& v : r) {
      v = std::exp(v - mx);
      z += v;
    }
    for (double& v : r) v /= z;
  }
  return p;
}

namespace {

void check_labels(const Matrix& logits, std::span<const std::size_t> labels) {
  if (labels.size() != logits.rows()) {
    throw ShapeError("cross entropy: " + std::to_string(labels.size()) + " labels for logits " + logits.shape_str());
  }
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] >= logits.cols()) {
      throw IndexError("cross entropy: label " + std::to_string(labels[i]) + " at row " + std::to_string(i) +
                       " outside [0, " + std::to_string(logits.cols()) + ")");
    }
  }
}

}  // namespace

Matrix cross_entropy_per_sample(const Matrix& logits, std::span<const std::size_t> labels) {
  check_labels(logits, labels);
  Matrix out(logits.rows(), 1);
  for (std::size_t i = 0; i < logits.rows(); ++i) {
    auto r = logits.row_span(i);
    const double mx = *std::max_element(r.begin(), r.end());
    double z = 0.0;
    for (double v : r) z += std::exp(v - mx);
    out(i, 0) = std::log(z) + mx - r[labels[i]];
  }
  return out;
}

CrossEntropyResult softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels) {
  const Matrix per_sample = cross_entropy_per_sample(logits, labels);
  const double b = static_cast<double>(logits.rows());
  Matrix grad = softmax(logits);
  for (std::size_t i = 0; i < grad.rows(); ++i) grad(i, labels[i]) -= 1.0;
  grad *= 1.0 / b;
  return {sum(per_sample) / b, std::move(grad)};
}

std::vector<std::size_t> labels_from_column(const Matrix& column) {
  if (column.cols() != 1) throw ShapeError("class labels must be a [b, 1] column, got " + column.shape_str());
  std::vector<std::size_t> out(column.rows());
  for (std::size_t i = 0; i < column.rows(); ++i) {
    const double v = column(i, 0);
    if (!(v >= 0.0) || v != std::floor(v)) {
      throw IndexError("class label at row " + std::to_string(i) + " is not a non-negative integer");
    }
    out[i] = static_cast<std::size_t>(v);
  }
  return out;
}

Matrix labels_to_column(std::span<const std::size_t> labels) {
  Matrix m(labels.size(), 1);
  for (std::size_t i = 0; i < labels.size(); ++i) m(i, 0) = static_cast<double>(labels[i]);
  return m;
}

}  // namespace lamina
