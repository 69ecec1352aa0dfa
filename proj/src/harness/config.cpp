#include "lamina/harness/config.hpp"

#include <algorithm>
#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "lamina/errors.hpp"

#ifndef LAMINA_DEFAULT_CONFIG_DIR
#define LAMINA_DEFAULT_CONFIG_DIR "configs"
#endif

namespace lamina::harness {

std::size_t ExperimentConfig::batch_size_for(int epoch) const {
  const std::size_t cap = batch_max == 0 ? train_subset : batch_max;
  if (batch_schedule == BatchSchedule::Fixed || batch_double_every < 1) return std::min(batch_size, cap);
  std::size_t size = batch_size;
  for (int doublings = (epoch - 1) / batch_double_every; doublings > 0 && size < cap; --doublings) size *= 2;
  return std::min(size, cap);
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"baseline", "decision-linear", "least-squares-tp", "linear-tp",
                                              "fa",       "dfa",             "neural-decision"};
  return names;
}

std::string experiment_summary(const std::string& name) {
  if (name == "baseline") return "gradient learners 784-128-32-10, Linear -> ReLU -> BatchNorm hidden layers";
  if (name == "decision-linear") return "regression tree ensemble (9 x 32 trees, depth 11) -> BatchNorm -> Linear 32-10 -> ReLU";
  if (name == "least-squares-tp") return "784-128-128-128-10, ridge input targets through each linear map";
  if (name == "linear-tp") return "784-128-128-128-10, learned reverse models for the two middle layers";
  if (name == "fa") return "feedback alignment 784-32-10";
  if (name == "dfa") return "direct feedback alignment 784-32-32-10, BatchNorm hidden layers";
  if (name == "neural-decision") return "dropout MLP 784-256 -> classification tree ensemble (9 trees, depth 10)";
  return defaults_for(name).name;  // throws with the valid names
}

ExperimentConfig defaults_for(const std::string& name) {
  const auto& names = experiment_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::string valid;
    for (const auto& n : names) valid += (valid.empty() ? "" : ", ") + n;
    throw ConfigError("unknown experiment '" + name + "'; valid: " + valid);
  }
  ExperimentConfig c;
  c.name = name;
  if (name == "baseline") {
    c.epochs = 5;
  } else if (name == "decision-linear") {
    c.epochs = 6;
    c.batch_schedule = BatchSchedule::Doubling;
    c.batch_max = 512;
    c.tree_depth = 11;
    c.x_iterations = 40;
    c.x_step = 0.1;
  } else if (name == "least-squares-tp") {
    c.epochs = 5;
  } else if (name == "linear-tp") {
    c.epochs = 8;
    c.hidden_lr = 1e-4;
  } else if (name == "fa") {
    c.epochs = 5;
    c.optimizer = "sgd";
    c.lr = 0.2;
  } else if (name == "dfa") {
    c.epochs = 5;
  } else if (name == "neural-decision") {
    c.epochs = 4;
    c.tree_depth = 10;
    c.k = 8;
    c.dropout_p = 0.5;
  }
  return c;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <typename T>
T parse_integer(const std::string& key, const std::string& value) {
  T out{};
  const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigError("setting '" + key + "': '" + value + "' is not a valid integer");
  }
  return out;
}

double parse_double(const std::string& key, const std::string& value) {
  char* end = nullptr;
  errno = 0;
  const double out = std::strtod(value.c_str(), &end);
  if (value.empty() || end != value.c_str() + value.size() || errno == ERANGE) {
    throw ConfigError("setting '" + key + "': '" + value + "' is not a valid number");
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "on" || value == "1") return true;
  if (value == "false" || value == "off" || value == "0") return false;
  throw ConfigError("setting '" + key + "': '" + value + "' is not a boolean");
}

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace

void apply_setting(ExperimentConfig& c, const std::string& key, const std::string& value) {
  if (key == "experiment") {
    defaults_for(value);
    c.name = value;
  } else if (key == "seed") {
    c.seed = parse_integer<std::uint64_t>(key, value);
  } else if (key == "epochs") {
    c.epochs = parse_integer<int>(key, value);
    if (c.epochs < 0) throw ConfigError("setting 'epochs' must be non-negative");
  } else if (key == "train_subset") {
    c.train_subset = parse_integer<std::size_t>(key, value);
  } else if (key == "test_subset") {
    c.test_subset = parse_integer<std::size_t>(key, value);
  } else if (key == "batch_size") {
    c.batch_size = parse_integer<std::size_t>(key, value);
    if (c.batch_size == 0) throw ConfigError("setting 'batch_size' must be positive");
  } else if (key == "batch_schedule") {
    if (value == "fixed") {
      c.batch_schedule = BatchSchedule::Fixed;
    } else if (value == "doubling") {
      c.batch_schedule = BatchSchedule::Doubling;
    } else {
      throw ConfigError("setting 'batch_schedule': expected fixed or doubling, got '" + value + "'");
    }
  } else if (key == "batch_double_every") {
    c.batch_double_every = parse_integer<int>(key, value);
  } else if (key == "batch_max") {
    c.batch_max = parse_integer<std::size_t>(key, value);
  } else if (key == "optimizer") {
    if (value != "adam" && value != "sgd") {
      throw ConfigError("setting 'optimizer': expected adam or sgd, got '" + value + "'");
    }
    c.optimizer = value;
  } else if (key == "lr") {
    c.lr = parse_double(key, value);
  } else if (key == "hidden_lr") {
    c.hidden_lr = parse_double(key, value);
  } else if (key == "reverse_lr") {
    c.reverse_lr = parse_double(key, value);
  } else if (key == "lambda") {
    c.lambda = parse_double(key, value);
    if (c.lambda < 0.0) throw ConfigError("setting 'lambda' must be non-negative");
  } else if (key == "k") {
    c.k = parse_integer<std::size_t>(key, value);
    if (c.k < 1) throw ConfigError("setting 'k' must be at least 1");
  } else if (key == "dropout_p") {
    c.dropout_p = parse_double(key, value);
    if (!(c.dropout_p >= 0.0 && c.dropout_p < 1.0)) throw ConfigError("setting 'dropout_p' must lie in [0, 1)");
  } else if (key == "dropout_final_p") {
    c.dropout_final_p = parse_double(key, value);
    if (c.dropout_final_p >= 1.0) throw ConfigError("setting 'dropout_final_p' must be below 1");
  } else if (key == "capacity") {
    c.capacity = parse_integer<std::size_t>(key, value);
    if (c.capacity < 1) throw ConfigError("setting 'capacity' must be at least 1");
  } else if (key == "tree_depth") {
    c.tree_depth = parse_integer<int>(key, value);
    if (c.tree_depth < 0) throw ConfigError("setting 'tree_depth' must be non-negative");
  } else if (key == "x_iterations") {
    c.x_iterations = parse_integer<int>(key, value);
    if (c.x_iterations < 1) throw ConfigError("setting 'x_iterations' must be at least 1");
  } else if (key == "x_step") {
    c.x_step = parse_double(key, value);
  } else if (key == "step_order") {
    if (value == "step_x-first") {
      c.step_x_first = true;
    } else if (value == "step-first") {
      c.step_x_first = false;
    } else {
      throw ConfigError("setting 'step_order': expected step_x-first or step-first, got '" + value + "'");
    }
  } else if (key == "alternate") {
    c.alternate = parse_bool(key, value);
  } else if (key == "diagnostics") {
    c.diagnostics = parse_bool(key, value);
  } else {
    throw ConfigError("unknown setting '" + key + "'");
  }
}

ExperimentConfig parse_config(std::string_view text, const std::string& source) {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::string name = "baseline";
  std::istringstream in{std::string(text)};
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(source + ":" + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty()) throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
    if (key == "experiment") name = value;
    pairs.emplace_back(std::move(key), std::move(value));
  }
  ExperimentConfig c;
  try {
    c = defaults_for(name);
    for (const auto& [key, value] : pairs) apply_setting(c, key, value);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return c;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.string());
}

std::map<std::string, std::string> settings(const ExperimentConfig& c) {
  return {
      {"experiment", c.name},
      {"seed", std::to_string(c.seed)},
      {"epochs", std::to_string(c.epochs)},
      {"train_subset", std::to_string(c.train_subset)},
      {"test_subset", std::to_string(c.test_subset)},
      {"batch_size", std::to_string(c.batch_size)},
      {"batch_schedule", c.batch_schedule == BatchSchedule::Fixed ? "fixed" : "doubling"},
      {"batch_double_every", std::to_string(c.batch_double_every)},
      {"batch_max", std::to_string(c.batch_max)},
      {"optimizer", c.optimizer},
      {"lr", format_double(c.lr)},
      {"lambda", format_double(c.lambda)},
      {"reverse_lr", format_double(c.reverse_lr)},
      {"hidden_lr", format_double(c.hidden_lr)},
      {"k", std::to_string(c.k)},
      {"dropout_p", format_double(c.dropout_p)},
      {"dropout_final_p", format_double(c.dropout_final_p)},
      {"capacity", std::to_string(c.capacity)},
      {"tree_depth", std::to_string(c.tree_depth)},
      {"x_iterations", std::to_string(c.x_iterations)},
      {"x_step", format_double(c.x_step)},
      {"step_order", c.step_x_first ? "step_x-first" : "step-first"},
      {"alternate", c.alternate ? "true" : "false"},
      {"diagnostics", c.diagnostics ? "true" : "false"},
  };
}

std::filesystem::path default_config_dir() {
  if (const char* env = std::getenv("LAMINA_CONFIG_DIR"); env != nullptr && *env != '\0') return env;
  return LAMINA_DEFAULT_CONFIG_DIR;
}

}  // namespace lamina::harness
