#include <cstdio>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "lamina/harness/experiment.hpp"
#include "lamina/layers/gradcheck.hpp"

namespace fs = std::filesystem;
using namespace lamina;
using namespace lamina::harness;

namespace {

struct ConfigArgs {
  std::string experiment, config_path;
  std::uint64_t seed = 0;
  std::size_t train_subset = 0, test_subset = 0;
  int epochs = 0;
  bool diagnostics = false;
  std::vector<std::string> overrides;
};

void add_config_options(CLI::App* cmd, ConfigArgs& a) {
  cmd->add_option("--experiment", a.experiment, "Experiment name (see `lamina list`)")->required();
  cmd->add_option("--config", a.config_path, "key = value file; default <config dir>/<experiment>.conf");
  cmd->add_option("--seed", a.seed);
  cmd->add_option("--train-subset", a.train_subset);
  cmd->add_option("--test-subset", a.test_subset);
  cmd->add_option("--epochs", a.epochs);
  cmd->add_flag("--diagnostics", a.diagnostics, "Record per-layer GER/LER series");
  cmd->add_option("--set", a.overrides, "Override any config key, key=value");
}

ExperimentConfig resolve_config(const CLI::App& cmd, const ConfigArgs& a) {
  ExperimentConfig config;
  if (!a.config_path.empty()) {
    config = load_config_file(a.config_path);
  } else if (const fs::path file = default_config_dir() / (a.experiment + ".conf"); fs::exists(file)) {
    config = load_config_file(file);
  } else {
    config = defaults_for(a.experiment);
  }
  if (config.name != a.experiment) apply_setting(config, "experiment", a.experiment);
  const std::pair<const char*, const char*> flags[] = {
      {"--seed", "seed"}, {"--epochs", "epochs"}, {"--train-subset", "train_subset"}, {"--test-subset", "test_subset"}};
  for (const auto& [flag, key] : flags)
    if (cmd.count(flag) > 0) apply_setting(config, key, cmd[flag]->as<std::string>());
  if (a.diagnostics) config.diagnostics = true;
  for (const auto& kv : a.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
    apply_setting(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  return config;
}

int run(const ExperimentConfig& config, const std::string& data_dir, const std::string& out, const std::string& format,
        bool timing) {
  const Dataset full = load_mnist(data_dir.empty() ? default_data_dir() : fs::path(data_dir));
  const Split split = split_subsets(full, config.train_subset, config.test_subset, config.seed);
  RunOptions options;
  options.timing = timing;
  options.on_epoch = [](const EpochRecord& e) {
    std::fprintf(stderr, "epoch %d  batch %zu  loss %.4f  train %.4f  test %.4f\n", e.epoch, e.batch_size, e.mean_loss,
                 e.train_accuracy, e.test_accuracy);
  };
  const MetricsRecord record = run_experiment(config, split, options);
  if (out.empty() || out == "-") {
    std::cout << (parse_metrics_format(format) == MetricsFormat::Json ? to_json(record) : to_csv(record));
  } else {
    emit_metrics(record, parse_metrics_format(format), out);
  }
  return 0;
}

int gradcheck(std::uint64_t seed, std::size_t shapes, bool verbose) {
  const auto suite = layers::run_gradcheck_suite(seed, shapes);
  double worst = 0.0;
  for (const auto& c : suite.cases) {
    worst = std::max(worst, c.max_relative_error);
    const bool ok = c.max_relative_error < suite.tolerance;
    if (verbose || !ok) {
      std::printf("%-4s %-32s %-5s %-6s %.3e\n", ok ? "ok" : "FAIL", c.layer.c_str(), c.mode.c_str(), c.shape.c_str(),
                  c.max_relative_error);
    }
  }
  std::printf("%zu cases, worst relative error %.3e, tolerance %.0e: %s\n", suite.cases.size(), worst, suite.tolerance,
              suite.passed() ? "passed" : "FAILED");
  return suite.passed() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Layer-wise learning machines on MNIST"};
  app.require_subcommand(1);

  auto* run_cmd = app.add_subcommand("run", "Train one experiment and write its metrics");
  ConfigArgs run_args;
  std::string data_dir, out, format = "json";
  bool timing = false;
  add_config_options(run_cmd, run_args);
  run_cmd->add_option("--data-dir", data_dir, "MNIST IDX directory; default $LAMINA_DATA_DIR");
  run_cmd->add_option("--out", out, "Metrics file; stdout when omitted");
  run_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  run_cmd->add_flag("--timing", timing, "Record wall-clock time (output is then not reproducible)");

  auto* show_cmd = app.add_subcommand("show", "Print the resolved config as key = value lines");
  ConfigArgs show_args;
  add_config_options(show_cmd, show_args);

  auto* grad_cmd = app.add_subcommand("gradcheck", "Finite-difference check of every layer");
  std::uint64_t grad_seed = 0;
  std::size_t shapes = 10;
  bool verbose = false;
  grad_cmd->add_option("--seed", grad_seed);
  grad_cmd->add_option("--shapes", shapes);
  grad_cmd->add_flag("-v,--verbose", verbose);

  auto* list_cmd = app.add_subcommand("list", "List experiments");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run_cmd) return run(resolve_config(*run_cmd, run_args), data_dir, out, format, timing);
    if (*show_cmd) {
      for (const auto& [key, value] : settings(resolve_config(*show_cmd, show_args)))
        std::printf("%s = %s\n", key.c_str(), value.c_str());
      return 0;
    }
    if (*grad_cmd) return gradcheck(grad_seed, shapes, verbose);
    if (*list_cmd) {
      for (const auto& name : experiment_names()) std::printf("%-18s %s\n", name.c_str(), experiment_summary(name).c_str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lamina: %s\n", e.what());
    return 2;
  }
  return 0;
}
