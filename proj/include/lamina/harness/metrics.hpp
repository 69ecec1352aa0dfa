#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lamina::harness {

struct EpochRecord {
  int epoch = 0;
  std::size_t batch_size = 0;
  std::size_t steps = 0;
  double mean_loss = 0.0;
  double train_accuracy = 0.0;
  double test_accuracy = 0.0;
};

/// Everything one run records. Per-layer series are indexed [layer][step];
/// ger and ler are empty unless diagnostics were on. mad entries are NaN for
/// layers whose target is not shaped like their output.
struct MetricsRecord {
  std::string experiment;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> config;
  double initial_train_accuracy = 0.0;
  double initial_test_accuracy = 0.0;
  std::vector<EpochRecord> epochs;
  std::vector<double> step_loss;
  std::vector<std::vector<double>> ger;
  std::vector<std::vector<double>> ler;
  std::vector<std::vector<double>> mad;
  /// Only recorded when timing is requested, so that output stays
  /// reproducible by default.
  std::optional<double> wall_clock_seconds;

  double final_test_accuracy() const { return epochs.empty() ? initial_test_accuracy : epochs.back().test_accuracy; }
};

/// Bitwise equality of every field (NaN equals NaN).
bool identical(const MetricsRecord& a, const MetricsRecord& b);

enum class MetricsFormat { Json, Csv };

MetricsFormat parse_metrics_format(const std::string& name);

/// Sorted-key JSON; doubles use the shortest representation that parses back
/// to the same value, NaN is written as null.
std::string to_json(const MetricsRecord& record);
MetricsRecord from_json(const std::string& text);
/// One row per epoch under a header; doubles printed with 17 significant digits.
std::string to_csv(const MetricsRecord& record);

void emit_metrics(const MetricsRecord& record, MetricsFormat format, const std::filesystem::path& path);
MetricsRecord read_metrics_json(const std::filesystem::path& path);

}  // namespace lamina::harness
