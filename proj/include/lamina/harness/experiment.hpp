#pragma once

#include <functional>
#include <memory>

#include "lamina/errors.hpp"
#include "lamina/harness/config.hpp"
#include "lamina/harness/dataset.hpp"
#include "lamina/harness/metrics.hpp"
#include "lamina/kikai/stacked.hpp"

namespace lamina::harness {

/// A failure inside a run, prefixed with the experiment, epoch and step.
class ExperimentError : public Error {
 public:
  using Error::Error;
};

/// The stack for a named experiment. Every random stream derives from
/// config.seed.
std::unique_ptr<kikai::StackedLearner> build_experiment(const ExperimentConfig& config, std::size_t input_dim = 784,
                                                        std::size_t n_classes = 10);

struct RunOptions {
  bool timing = false;
  std::function<void(const EpochRecord&)> on_epoch;
};

/// Trains on shuffled minibatches for config.epochs epochs and evaluates
/// train and test accuracy (eval mode) before training and after each epoch.
MetricsRecord run_experiment(const ExperimentConfig& config, const Split& data, const RunOptions& options = {});

/// Fraction of rows whose argmax output equals the label, in eval mode.
double accuracy(kikai::StackedLearner& stack, const Dataset& data);

}  // namespace lamina::harness
