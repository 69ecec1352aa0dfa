#include "lamina/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "lamina/errors.hpp"

namespace lamina {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows * cols) {
    throw ShapeError("matrix data length " + std::to_string(data_.size()) + " does not match [" +
                     std::to_string(rows) + ", " + std::to_string(cols) + "]");
  }
}

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows)
    : rows_(rows.size()), cols_(rows.size() ? rows.begin()->size() : 0) {
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw ShapeError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::row(std::span<const double> values) {
  return Matrix(1, values.size(), std::vector<double>(values.begin(), values.end()));
}

std::string Matrix::shape_str() const {
  return "[" + std::to_string(rows_) + ", " + std::to_string(cols_) + "]";
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (!a.same_shape(b)) {
    throw ShapeError(std::string(op) + ": shape mismatch " + a.shape_str() + " vs " + b.shape_str());
  }
}

Matrix& Matrix::operator+=(const Matrix& other) {
  require_same_shape(*this, other, "add");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  require_same_shape(*this, other, "subtract");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= other.data_[i];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(Matrix a, double s) { return a *= s; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions disagree " + a.shape_str() + " x " + b.shape_str());
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
  for (std::size_t i = 0; i < m; ++i) {
    double* crow = c.row_span(i).data();
    for (std::size_t p = 0; p < k; ++p) {
      const double av = a(i, p);
      if (av == 0.0) continue;
      const double* brow = b.row_span(p).data();
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw ShapeError("matmul_tn: row counts disagree " + a.shape_str() + "ᵀ x " + b.shape_str());
  }
  const std::size_t m = a.cols(), n = b.cols();
  Matrix c(m, n);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double* arow = a.row_span(r).data();
    const double* brow = b.row_span(r).data();
    for (std::size_t i = 0; i < m; ++i) {
      const double av = arow[i];
      if (av == 0.0) continue;
      double* crow = c.row_span(i).data();
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) {
    throw ShapeError("matmul_nt: column counts disagree " + a.shape_str() + " x " + b.shape_str() + "ᵀ");
  }
  return matmul(a, transpose(b));
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

Matrix hadamard(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "hadamard");
  Matrix c = a;
  auto cd = c.data();
  auto bd = b.data();
  for (std::size_t i = 0; i < cd.size(); ++i) cd[i] *= bd[i];
  return c;
}

Matrix add_row_broadcast(Matrix a, const Matrix& row) {
  if (row.rows() != 1 || row.cols() != a.cols()) {
    throw ShapeError("add_row_broadcast: " + row.shape_str() + " cannot broadcast over " + a.shape_str());
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row_span(i);
    for (std::size_t j = 0; j < a.cols(); ++j) r[j] += row(0, j);
  }
  return a;
}

Matrix sum_rows(const Matrix& a) {
  Matrix s(1, a.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row_span(i);
    for (std::size_t j = 0; j < a.cols(); ++j) s(0, j) += r[j];
  }
  return s;
}

Matrix mean_rows(const Matrix& a) {
  Matrix s = sum_rows(a);
  if (a.rows() > 0) s *= 1.0 / static_cast<double>(a.rows());
  return s;
}

double sum(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v;
  return s;
}

double squared_norm(const Matrix& a) {
  double s = 0.0;
  for (double v : a.data()) s += v * v;
  return s;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

bool all_finite(const Matrix& a) {
  return std::all_of(a.data().begin(), a.data().end(), [](double v) { return std::isfinite(v); });
}

Matrix gather_rows(const Matrix& a, std::span<const std::size_t> indices) {
  Matrix out(indices.size(), a.cols());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] >= a.rows()) {
      throw IndexError("gather_rows: row " + std::to_string(indices[i]) + " out of range for " + a.shape_str());
    }
    std::copy_n(a.row_span(indices[i]).data(), a.cols(), out.row_span(i).data());
  }
  return out;
}

Matrix repeat_rows(const Matrix& a, std::size_t k) {
  Matrix out(a.rows() * k, a.cols());
  for (std::size_t c = 0; c < k; ++c)
    std::copy(a.data().begin(), a.data().end(), out.data().begin() + static_cast<std::ptrdiff_t>(c * a.size()));
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  if (top.empty()) return bottom;
  if (top.cols() != bottom.cols()) {
    throw ShapeError("vstack: " + top.shape_str() + " over " + bottom.shape_str());
  }
  std::vector<double> d(top.data().begin(), top.data().end());
  d.insert(d.end(), bottom.data().begin(), bottom.data().end());
  return Matrix(top.rows() + bottom.rows(), top.cols(), std::move(d));
}

std::vector<std::size_t> argmax_rows(const Matrix& a) {
  std::vector<std::size_t> out(a.rows(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row_span(i);
    out[i] = static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
  }
  return out;
}

}  // namespace lamina
