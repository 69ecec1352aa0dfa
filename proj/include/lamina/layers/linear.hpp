#pragma once

#include <optional>

#include "lamina/layers/layer.hpp"

namespace lamina::layers {

/// y = x·Wᵀ + b with W stored [out, in] and b as a [1, out] row.
class Linear : public Layer {
 public:
  /// Kaiming-uniform fan-in init for W (bound √(6 / in)), zero bias.
  Linear(std::size_t in, std::size_t out, Rng& rng);
  Linear(Matrix weight, Matrix bias);

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix infer(const Matrix& x, Mode mode, Rng* rng = nullptr) const override;
  Matrix backward(const Matrix& upstream) override;

  std::vector<Param*> params() override { return {&weight_, &bias_}; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Linear>(*this); }
  std::string name() const override { return "Linear"; }

  std::size_t in_features() const noexcept { return weight_.value.cols(); }
  std::size_t out_features() const noexcept { return weight_.value.rows(); }

  Param& weight() noexcept { return weight_; }
  Param& bias() noexcept { return bias_; }
  const Param& weight() const noexcept { return weight_; }
  const Param& bias() const noexcept { return bias_; }

  const std::optional<Matrix>& cached_input() const noexcept { return input_; }

 private:
  Param weight_;
  Param bias_;
  std::optional<Matrix> input_;
};

}  // namespace lamina::layers
