#pragma once

#include <functional>

#include "lamina/kaku/criterion.hpp"
#include "lamina/kaku/io.hpp"
#include "lamina/kaku/machine.hpp"

namespace lamina::kaku {

using ForwardFn = std::function<IO(const IO&)>;

/// L(pre(x_pre), t) − L(post(x_post), t) for the global cost over the suffix of
/// a network starting at some layer. Positive means the update helped.
double global_error_reduction(const Criterion& global, const ForwardFn& suffix_pre, const ForwardFn& suffix_post,
                              const IO& x_pre, const IO& x_post, const IO& t_global);

/// Same difference for one layer and its local criterion and target.
double local_error_reduction(const Criterion& local, const LearningMachine& machine_pre,
                             const LearningMachine& machine_post, const IO& x_pre, const IO& x_post,
                             const IO& t_local);

/// Convenience over global_error_reduction for a single machine standing in
/// for the whole suffix; uses infer() so neither machine is mutated.
double global_error_reduction(const Criterion& global, const LearningMachine& suffix_pre,
                              const LearningMachine& suffix_post, const IO& x_pre, const IO& x_post,
                              const IO& t_global);

}  // namespace lamina::kaku
