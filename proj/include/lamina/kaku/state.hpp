#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <tuple>
#include <variant>

#include "lamina/errors.hpp"
#include "lamina/kaku/assessment.hpp"
#include "lamina/kaku/io.hpp"
#include "lamina/matrix.hpp"

namespace lamina::kaku {

using StateValue = std::variant<Matrix, IO, Assessment, bool>;

/// Scratch storage for one learning step, keyed by
/// (machine identity, IO id, key). Owned by whoever drives the step and
/// discarded afterwards.
class State {
 public:
  /// IO id used for entries that do not belong to any particular IO.
  static constexpr std::uint64_t kNoIO = 0;

  void store(const void* machine, std::uint64_t io_id, const std::string& key, StateValue value);
  void store(const void* machine, const IO& io, const std::string& key, StateValue value) {
    store(machine, io.id(), key, std::move(value));
  }

  bool contains(const void* machine, std::uint64_t io_id, const std::string& key) const;
  bool contains(const void* machine, const IO& io, const std::string& key) const {
    return contains(machine, io.id(), key);
  }

  template <typename T>
  const T& fetch(const void* machine, std::uint64_t io_id, const std::string& key) const {
    const StateValue& v = lookup(machine, io_id, key);
    if (const T* p = std::get_if<T>(&v)) return *p;
    throw MissingStateError("state entry " + describe(machine, io_id, key) + " holds a different type");
  }
  template <typename T>
  const T& fetch(const void* machine, const IO& io, const std::string& key) const {
    return fetch<T>(machine, io.id(), key);
  }

  void erase(const void* machine, std::uint64_t io_id, const std::string& key);
  void clear() noexcept { entries_.clear(); }
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  using Key = std::tuple<const void*, std::uint64_t, std::string>;

  const StateValue& lookup(const void* machine, std::uint64_t io_id, const std::string& key) const;
  static std::string describe(const void* machine, std::uint64_t io_id, const std::string& key);

  std::map<Key, StateValue> entries_;
};

}  // namespace lamina::kaku
