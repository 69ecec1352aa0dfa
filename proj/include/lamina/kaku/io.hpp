#pragma once

#include <cstdint>
#include <vector>

#include "lamina/matrix.hpp"

namespace lamina::kaku {

/// Ordered tuple of matrices with an identity token. Copies share the identity
/// (they are the same value); every construction mints a new one.
class IO {
 public:
  explicit IO(Matrix part);
  explicit IO(std::vector<Matrix> parts);

  std::uint64_t id() const noexcept { return id_; }
  const std::vector<Matrix>& parts() const noexcept { return parts_; }
  std::size_t size() const noexcept { return parts_.size(); }

  /// First part; most machines work on single-matrix IOs.
  const Matrix& f() const noexcept { return parts_.front(); }
  const Matrix& operator[](std::size_t i) const { return parts_.at(i); }

 private:
  std::uint64_t id_;
  std::vector<Matrix> parts_;
};

}  // namespace lamina::kaku
