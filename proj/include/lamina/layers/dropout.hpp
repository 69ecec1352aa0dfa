#pragma once

#include <optional>

#include "lamina/layers/layer.hpp"

namespace lamina::layers {

/// Inverted dropout: in training each unit survives with probability 1 − p
/// and is scaled by 1/(1 − p). Identity in eval mode.
class Dropout : public Layer {
 public:
  Dropout(double p, Rng rng);

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix infer(const Matrix& x, Mode mode, Rng* rng = nullptr) const override;
  Matrix backward(const Matrix& upstream) override;

  std::unique_ptr<Layer> clone() const override { return std::make_unique<Dropout>(*this); }
  std::string name() const override { return "Dropout"; }

  double p() const noexcept { return p_; }
  void set_p(double p);
  const std::optional<Matrix>& mask() const noexcept { return mask_; }

 private:
  Matrix draw_mask(std::size_t rows, std::size_t cols, Rng& rng) const;

  double p_;
  Rng rng_;
  std::optional<Matrix> mask_;
};

}  // namespace lamina::layers
