#include "lamina/kaku/assessment.hpp"

#include <cmath>
#include <string>

#include "lamina/errors.hpp"

namespace lamina::kaku {

Assessment::Assessment(double value, bool maximize) : value_(value), maximize_(maximize) {
  if (!std::isfinite(value)) throw Error("assessment value is not finite: " + std::to_string(value));
}

std::size_t best_index(std::span<const Assessment> assessments) {
  if (assessments.empty()) throw EmptyInputError("best_index: no assessments");
  std::size_t best = 0;
  for (std::size_t i = 1; i < assessments.size(); ++i) {
    if (assessments[i].better_than(assessments[best])) best = i;
  }
  return best;
}

}  // namespace lamina::kaku
