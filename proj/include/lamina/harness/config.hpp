#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace lamina::harness {

enum class BatchSchedule { Fixed, Doubling };

struct ExperimentConfig {
  std::string name = "baseline";
  std::uint64_t seed = 0;
  int epochs = 5;
  std::size_t train_subset = 8000;
  std::size_t test_subset = 2000;

  std::size_t batch_size = 128;
  BatchSchedule batch_schedule = BatchSchedule::Fixed;
  int batch_double_every = 2;
  /// Upper bound for the doubling schedule; 0 means the training subset size.
  std::size_t batch_max = 0;

  /// "adam" or "sgd", for every learner in the stack.
  std::string optimizer = "adam";
  double lr = 1e-3;
  /// Learning rate of learned reverse models; 0 means lr.
  double reverse_lr = 0.0;
  /// Learning rate of layers trained on propagated targets in the
  /// target-propagation experiments; 0 means lr.
  double hidden_lr = 0.0;
  /// Ridge coefficient of least-squares input targets.
  double lambda = 1e-3;
  /// Candidates per sample for hill climbing.
  std::size_t k = 8;
  double dropout_p = 0.5;
  /// Linear decay of dropout_p toward this value over the run; negative: off.
  double dropout_final_p = -1.0;
  std::size_t capacity = 9;
  int tree_depth = 11;
  /// Input-descent iterations and step size for layers that use them.
  int x_iterations = 1;
  double x_step = 1.0;
  bool step_x_first = true;
  /// Alternate reverse/forward training by epoch in reconstruction learners.
  bool alternate = true;
  bool diagnostics = false;

  /// Batch size used in a 1-based epoch.
  std::size_t batch_size_for(int epoch) const;
};

/// Valid experiment names, in catalog order.
const std::vector<std::string>& experiment_names();
/// One-line architecture summary per experiment.
std::string experiment_summary(const std::string& name);

/// Built-in defaults for a named experiment. Unknown name: ConfigError listing
/// the valid ones.
ExperimentConfig defaults_for(const std::string& name);

/// Sets one field from its textual form. Unknown keys and malformed values
/// throw ConfigError.
void apply_setting(ExperimentConfig& config, const std::string& key, const std::string& value);

/// key = value lines; '#' starts a comment. An `experiment` key selects the
/// defaults the remaining keys override, wherever it appears.
ExperimentConfig parse_config(std::string_view text, const std::string& source = "<config>");
ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Every field as text, in key order. Feeding these back through
/// apply_setting reproduces the config.
std::map<std::string, std::string> settings(const ExperimentConfig& config);

/// Directory holding <name>.conf files: LAMINA_CONFIG_DIR if set, else the
/// build-time default.
std::filesystem::path default_config_dir();

}  // namespace lamina::harness
