#include "lamina/kaku/io.hpp"

#include <atomic>

#include "lamina/errors.hpp"

namespace lamina::kaku {

namespace {

std::uint64_t next_id() {
  // 0 is reserved for State::kNoIO.
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

}  // namespace

IO::IO(Matrix part) : id_(next_id()) { parts_.push_back(std::move(part)); }

IO::IO(std::vector<Matrix> parts) : id_(next_id()), parts_(std::move(parts)) {
  if (parts_.empty()) throw EmptyInputError("IO needs at least one part");
}

}  // namespace lamina::kaku
