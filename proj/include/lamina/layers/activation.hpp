#pragma once

#include <optional>

#include "lamina/layers/layer.hpp"

namespace lamina::layers {

class Relu : public Layer {
 public:
  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix infer(const Matrix& x, Mode mode, Rng* rng = nullptr) const override;
  /// Upstream gradient times the cached (x > 0) mask.
  Matrix backward(const Matrix& upstream) override;

  std::unique_ptr<Layer> clone() const override { return std::make_unique<Relu>(*this); }
  std::string name() const override { return "ReLU"; }

  const std::optional<Matrix>& mask() const noexcept { return mask_; }

 private:
  std::optional<Matrix> mask_;
};

}  // namespace lamina::layers
