#include "lamina/kaku/optimizer.hpp"

#include <cmath>

#include "lamina/errors.hpp"

namespace lamina::kaku {

void Optimizer::reset() {
  t_ = 0;
  m_.clear();
  v_.clear();
}

void Optimizer::step(std::span<Param* const> params) {
  for (const Param* p : params) require_same_shape(p->value, p->grad, "optimizer step");

  if (kind_ == OptimizerKind::SGD) {
    for (Param* p : params) {
      auto v = p->value.data();
      auto g = p->grad.data();
      for (std::size_t i = 0; i < v.size(); ++i) v[i] -= lr_ * g[i];
      p->zero_grad();
    }
    ++t_;
    return;
  }

  if (m_.empty()) {
    for (const Param* p : params) {
      m_.emplace_back(p->value.rows(), p->value.cols());
      v_.emplace_back(p->value.rows(), p->value.cols());
    }
  }
  if (m_.size() != params.size()) {
    throw ShapeError("adam: parameter list changed from " + std::to_string(m_.size()) + " to " +
                     std::to_string(params.size()) + " entries");
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t k = 0; k < params.size(); ++k) {
    Param* p = params[k];
    require_same_shape(m_[k], p->grad, "adam moments");
    auto val = p->value.data();
    auto g = p->grad.data();
    auto m = m_[k].data();
    auto v = v_[k].data();
    for (std::size_t i = 0; i < val.size(); ++i) {
      m[i] = beta1_ * m[i] + (1.0 - beta1_) * g[i];
      v[i] = beta2_ * v[i] + (1.0 - beta2_) * g[i] * g[i];
      const double mhat = m[i] / c1;
      const double vhat = v[i] / c2;
      val[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
    }
    p->zero_grad();
  }
}

}  // namespace lamina::kaku
