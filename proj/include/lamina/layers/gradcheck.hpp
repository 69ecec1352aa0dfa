#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lamina/layers/layer.hpp"

namespace lamina::layers {

struct GradCheckEntry {
  std::string what;       // "input" or "param[k]"
  double relative_error;  // ‖analytic − numeric‖ / max(‖analytic‖ + ‖numeric‖, 1e-4)
  std::size_t skipped;    // coordinates dropped because they straddle a kink
};

struct GradCheckReport {
  std::vector<GradCheckEntry> entries;
  double max_relative_error() const;
};

/// Compares the layer's backward pass with central differences of
/// f(x) = Σ R ⊙ layer(x) for a random projection R.
///
/// Every numeric evaluation runs on a fresh clone taken before the analytic
/// forward, so stochastic layers replay the same mask. Coordinates where the
/// second difference reveals a non-smooth point (ReLU at 0) are skipped and
/// counted.
GradCheckReport check_gradients(const Layer& layer, const Matrix& x, Mode mode, Rng& rng, double h = 1e-5);

struct GradCheckCase {
  std::string layer;  // e.g. "Linear", "Linear>Relu>BatchNorm1d"
  std::string mode;   // "train" or "eval"
  std::string shape;  // input shape
  double max_relative_error;
};

struct GradCheckSuite {
  std::vector<GradCheckCase> cases;
  double tolerance;
  bool passed() const;
};

/// Every layer type and several Sequential compositions, each on `shapes`
/// random input shapes, in train and eval mode.
GradCheckSuite run_gradcheck_suite(std::uint64_t seed, std::size_t shapes = 10, double tolerance = 1e-5,
                                   double h = 1e-5);

}  // namespace lamina::layers
