#pragma once

#include <memory>
#include <string>
#include <vector>

#include "lamina/kaku/assessment.hpp"
#include "lamina/kaku/io.hpp"
#include "lamina/kaku/optimizer.hpp"
#include "lamina/kaku/state.hpp"
#include "lamina/rng.hpp"

namespace lamina::kaku {

enum class Mode { Train, Eval };

/// A semi-autonomous learner: it owns its forward pass, its assessment, its
/// parameter update (step) and the computation of a target for whatever feeds
/// it (step_x).
///
/// Contract:
///  - forward records what step/step_x need in `state` under this machine.
///  - step_x never changes parameters; step never changes its x argument.
///  - When has_accumulate() is true, step applies exactly what accumulate
///    gathered.
class LearningMachine {
 public:
  virtual ~LearningMachine() = default;

  /// `release` is kept for interface parity; there is no autodiff tape to
  /// detach from, so it has no effect.
  virtual IO forward(const IO& x, State& state, bool release = true) = 0;
  /// Forward in the current mode without touching caches, running statistics
  /// or the machine's own random stream.
  virtual IO infer(const IO& x) const = 0;
  /// Like infer, but stochastic layers draw from `rng` instead of a copy of
  /// their own stream. Deterministic machines ignore it.
  virtual IO sample(const IO& x, Rng& /*rng*/) const { return infer(x); }
  virtual Assessment assess_y(const IO& y, const IO& t) const = 0;

  virtual bool has_accumulate() const { return false; }
  virtual void accumulate(const IO& x, const IO& t, State& state);
  virtual void step(const IO& x, const IO& t, State& state) = 0;
  virtual IO step_x(const IO& x, const IO& t, State& state) = 0;

  virtual void set_mode(Mode mode) { mode_ = mode; }
  Mode mode() const noexcept { return mode_; }
  /// Training epoch (1-based) for machines whose behavior alternates by epoch.
  virtual void set_epoch(int /*epoch*/) {}
  /// Called by a stack with the machine that feeds this one.
  virtual void set_predecessor(const LearningMachine* /*predecessor*/) {}

  virtual std::vector<Param*> params() = 0;
  virtual std::unique_ptr<LearningMachine> clone() const = 0;
  virtual std::string name() const = 0;

 protected:
  LearningMachine() = default;
  LearningMachine(const LearningMachine&) = default;
  LearningMachine& operator=(const LearningMachine&) = default;

  Mode mode_ = Mode::Train;
};

/// Step-dependency bookkeeping: step writes the flag, step_x asserts it.
void mark_stepped(State& state, const LearningMachine* machine, const IO& x);
void require_stepped(const State& state, const LearningMachine* machine, const IO& x);

/// Input that produced `y` in a stack forward pass, recorded as
/// (producer, y.id, "source").
inline constexpr const char* kSourceKey = "source";

}  // namespace lamina::kaku
