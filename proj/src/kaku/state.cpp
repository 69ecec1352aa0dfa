#include "lamina/kaku/state.hpp"

#include <cstdio>

namespace lamina::kaku {

void State::store(const void* machine, std::uint64_t io_id, const std::string& key, StateValue value) {
  entries_.insert_or_assign(Key{machine, io_id, key}, std::move(value));
}

bool State::contains(const void* machine, std::uint64_t io_id, const std::string& key) const {
  return entries_.contains(Key{machine, io_id, key});
}

void State::erase(const void* machine, std::uint64_t io_id, const std::string& key) {
  entries_.erase(Key{machine, io_id, key});
}

const StateValue& State::lookup(const void* machine, std::uint64_t io_id, const std::string& key) const {
  auto it = entries_.find(Key{machine, io_id, key});
  if (it == entries_.end()) throw MissingStateError("no state entry " + describe(machine, io_id, key));
  return it->second;
}

std::string State::describe(const void* machine, std::uint64_t io_id, const std::string& key) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%p", machine);
  return "(machine " + std::string(buf) + ", io " + std::to_string(io_id) + ", key '" + key + "')";
}

}  // namespace lamina::kaku
