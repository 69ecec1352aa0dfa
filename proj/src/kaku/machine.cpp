#include "lamina/kaku/machine.hpp"

#include "lamina/errors.hpp"

namespace lamina::kaku {

namespace {
constexpr const char* kStepped = "stepped";
}

void LearningMachine::accumulate(const IO& /*x*/, const IO& /*t*/, State& /*state*/) {
  throw OrderingError(name() + " does not implement accumulate");
}

void mark_stepped(State& state, const LearningMachine* machine, const IO& x) {
  state.store(machine, x, kStepped, true);
}

void require_stepped(const State& state, const LearningMachine* machine, const IO& x) {
  if (!state.contains(machine, x, kStepped)) {
    throw OrderingError((machine ? machine->name() : std::string("machine")) +
                        ": step_x requires step() to run first for this input");
  }
}

}  // namespace lamina::kaku
