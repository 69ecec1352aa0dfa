#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lamina/kaku/machine.hpp"
#include "lamina/kaku/optimizer.hpp"
#include "lamina/matrix.hpp"
#include "lamina/rng.hpp"

namespace lamina::layers {

using kaku::Mode;
using kaku::Param;

/// Differentiable block with a hand-written backward pass.
///
/// forward() caches what backward() needs; backward() returns the gradient
/// with respect to the input and adds (+=) parameter gradients into each
/// Param's grad buffer. infer() is the same computation without side effects.
class Layer {
 public:
  virtual ~Layer() = default;

  virtual Matrix forward(const Matrix& x, Mode mode) = 0;
  /// Pure forward. Stochastic layers draw from `rng` when given, otherwise
  /// from a copy of their own stream.
  virtual Matrix infer(const Matrix& x, Mode mode, Rng* rng = nullptr) const = 0;
  virtual Matrix backward(const Matrix& upstream) = 0;

  virtual std::vector<Param*> params() { return {}; }
  virtual std::unique_ptr<Layer> clone() const = 0;
  virtual std::string name() const = 0;
};

}  // namespace lamina::layers
