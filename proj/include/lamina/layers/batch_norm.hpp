#pragma once

#include <optional>

#include "lamina/layers/layer.hpp"

namespace lamina::layers {

/// Per-feature batch normalization over the batch axis.
///
/// Training normalizes with the batch mean and biased batch variance and
/// folds the batch statistics into running estimates with `momentum` (the
/// running variance uses the unbiased estimate). Eval mode normalizes with the
/// running estimates only.
class BatchNorm1d : public Layer {
 public:
  explicit BatchNorm1d(std::size_t features, double momentum = 0.1, double eps = 1e-5);

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix infer(const Matrix& x, Mode mode, Rng* rng = nullptr) const override;
  Matrix backward(const Matrix& upstream) override;

  std::vector<Param*> params() override { return {&gamma_, &beta_}; }
  std::unique_ptr<Layer> clone() const override { return std::make_unique<BatchNorm1d>(*this); }
  std::string name() const override { return "BatchNorm1d"; }

  std::size_t features() const noexcept { return gamma_.value.cols(); }
  Param& gamma() noexcept { return gamma_; }
  Param& beta() noexcept { return beta_; }
  const Matrix& running_mean() const noexcept { return running_mean_; }
  const Matrix& running_var() const noexcept { return running_var_; }

 private:
  struct Cache {
    Mode mode;
    Matrix x_hat;
    Matrix inv_std;  // [1, f]
    Matrix mean;
    Matrix var;
  };

  Cache normalize(const Matrix& x, Mode mode) const;

  Param gamma_;
  Param beta_;
  Matrix running_mean_;
  Matrix running_var_;
  double momentum_;
  double eps_;
  std::optional<Cache> cache_;
};

}  // namespace lamina::layers
