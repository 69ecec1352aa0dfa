#pragma once

#include <span>

namespace lamina::kaku {

/// A scalar evaluation and whether larger is better.
class Assessment {
 public:
  Assessment(double value, bool maximize);

  double value() const noexcept { return value_; }
  bool maximize() const noexcept { return maximize_; }

  /// Strictly better under this assessment's direction.
  bool better_than(const Assessment& other) const noexcept {
    return maximize_ ? value_ > other.value_ : value_ < other.value_;
  }

  friend bool operator==(const Assessment&, const Assessment&) = default;

 private:
  double value_;
  bool maximize_;
};

/// Index of the best assessment; ties resolve to the lowest index.
std::size_t best_index(std::span<const Assessment> assessments);

}  // namespace lamina::kaku
