#include "lamina/layers/sequential.hpp"

namespace lamina::layers {

Sequential::Sequential(const Sequential& other) {
  layers_.reserve(other.layers_.size());
  for (const auto& l : other.layers_) layers_.push_back(l->clone());
}

Sequential& Sequential::operator=(const Sequential& other) {
  if (this != &other) {
    Sequential copy(other);
    layers_ = std::move(copy.layers_);
  }
  return *this;
}

Matrix Sequential::forward(const Matrix& x, Mode mode) {
  Matrix h = x;
  for (auto& l : layers_) h = l->forward(h, mode);
  return h;
}

Matrix Sequential::infer(const Matrix& x, Mode mode, Rng* rng) const {
  Matrix h = x;
  for (const auto& l : layers_) h = l->infer(h, mode, rng);
  return h;
}

Matrix Sequential::backward(const Matrix& upstream) {
  Matrix g = upstream;
  for (auto it = layers_.rbegin(); it != layers_.rend(); ++it) g = (*it)->backward(g);
  return g;
}

std::vector<Param*> Sequential::params() {
  std::vector<Param*> out;
  for (auto& l : layers_) {
    auto p = l->params();
    out.insert(out.end(), p.begin(), p.end());
  }
  return out;
}

}  // namespace lamina::layers
