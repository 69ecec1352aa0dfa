#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "lamina/matrix.hpp"

namespace lamina {

/// Solves min_X ‖a·X − b‖² + lambda·‖X‖² through the regularized normal
/// equations (aᵀa + lambda·I)·X = aᵀb and a Cholesky factorization.
/// Throws SingularityError when the system is not positive definite.
Matrix ridge_solve(const Matrix& a, const Matrix& b, double lambda);

/// Lower-triangular L with L·Lᵀ = spd; throws SingularityError on a
/// non-positive pivot.
Matrix cholesky(const Matrix& spd);
/// Solves L·Lᵀ·X = rhs for X given the Cholesky factor.
Matrix cholesky_solve(const Matrix& lower, const Matrix& rhs);

/// Row-wise softmax, shifted by the row max.
Matrix softmax(const Matrix& logits);

struct CrossEntropyResult {
  double loss;
  Matrix grad;
};

/// Mean over the batch of −log softmax(logits)[label], with gradient
/// (softmax − onehot)/batch.
CrossEntropyResult softmax_cross_entropy(const Matrix& logits, std::span<const std::size_t> labels);

/// Per-sample −log softmax(logits)[label] as a [b, 1] column.
Matrix cross_entropy_per_sample(const Matrix& logits, std::span<const std::size_t> labels);

/// Labels stored in a [b, 1] matrix (the IO convention for class targets).
std::vector<std::size_t> labels_from_column(const Matrix& column);
Matrix labels_to_column(std::span<const std::size_t> labels);

}  // namespace lamina
