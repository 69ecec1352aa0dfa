#include "lamina/kaku/diagnostics.hpp"

namespace lamina::kaku {

double global_error_reduction(const Criterion& global, const ForwardFn& suffix_pre, const ForwardFn& suffix_post,
                              const IO& x_pre, const IO& x_post, const IO& t_global) {
  const double before = global.loss(suffix_pre(x_pre).f(), t_global.f());
  const double after = global.loss(suffix_post(x_post).f(), t_global.f());
  return before - after;
}

double global_error_reduction(const Criterion& global, const LearningMachine& suffix_pre,
                              const LearningMachine& suffix_post, const IO& x_pre, const IO& x_post,
                              const IO& t_global) {
  return global_error_reduction(
      global, [&](const IO& x) { return suffix_pre.infer(x); }, [&](const IO& x) { return suffix_post.infer(x); },
      x_pre, x_post, t_global);
}

double local_error_reduction(const Criterion& local, const LearningMachine& machine_pre,
                             const LearningMachine& machine_post, const IO& x_pre, const IO& x_post,
                             const IO& t_local) {
  const double before = local.loss(machine_pre.infer(x_pre).f(), t_local.f());
  const double after = local.loss(machine_post.infer(x_post).f(), t_local.f());
  return before - after;
}

}  // namespace lamina::kaku
