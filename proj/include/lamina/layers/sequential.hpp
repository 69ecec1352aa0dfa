#pragma once

#include <memory>
#include <vector>

#include "lamina/layers/layer.hpp"

namespace lamina::layers {

/// Ordered composition. Forward runs first to last, backward last to first.
class Sequential : public Layer {
 public:
  Sequential() = default;
  explicit Sequential(std::vector<std::unique_ptr<Layer>> layers) : layers_(std::move(layers)) {}
  Sequential(const Sequential& other);
  Sequential& operator=(const Sequential& other);
  Sequential(Sequential&&) noexcept = default;
  Sequential& operator=(Sequential&&) noexcept = default;

  template <typename L, typename... Args>
  L& add(Args&&... args) {
    auto layer = std::make_unique<L>(std::forward<Args>(args)...);
    L& ref = *layer;
    layers_.push_back(std::move(layer));
    return ref;
  }
  void push_back(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

  Matrix forward(const Matrix& x, Mode mode) override;
  Matrix infer(const Matrix& x, Mode mode, Rng* rng = nullptr) const override;
  Matrix backward(const Matrix& upstream) override;

  std::vector<Param*> params() override;
  std::unique_ptr<Layer> clone() const override { return std::make_unique<Sequential>(*this); }
  std::string name() const override { return "Sequential"; }

  std::size_t size() const noexcept { return layers_.size(); }
  bool empty() const noexcept { return layers_.empty(); }
  Layer& operator[](std::size_t i) { return *layers_.at(i); }
  const Layer& operator[](std::size_t i) const { return *layers_.at(i); }

 private:
  std::vector<std::unique_ptr<Layer>> layers_;
};

}  // namespace lamina::layers
