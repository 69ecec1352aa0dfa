#include "lamina/harness/metrics.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "lamina/errors.hpp"

namespace lamina::harness {

using nlohmann::json;

namespace {

bool same_bits(double a, double b) {
  return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b) || (std::isnan(a) && std::isnan(b));
}

bool same_series(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_bits(a[i], b[i])) return false;
  return true;
}

bool same_table(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_series(a[i], b[i])) return false;
  return true;
}

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double number_from(const json& j) { return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>(); }

json series(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json table(const std::vector<std::vector<double>>& t) {
  json out = json::array();
  for (const auto& row : t) out.push_back(series(row));
  return out;
}

std::vector<double> series_from(const json& j) {
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number_from(x));
  return out;
}

std::vector<std::vector<double>> table_from(const json& j) {
  std::vector<std::vector<double>> out;
  for (const auto& row : j) out.push_back(series_from(row));
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

bool identical(const MetricsRecord& a, const MetricsRecord& b) {
  if (a.experiment != b.experiment || a.seed != b.seed || a.config != b.config) return false;
  if (!same_bits(a.initial_train_accuracy, b.initial_train_accuracy) ||
      !same_bits(a.initial_test_accuracy, b.initial_test_accuracy)) {
    return false;
  }
  if (a.epochs.size() != b.epochs.size()) return false;
  for (std::size_t i = 0; i < a.epochs.size(); ++i) {
    const auto& x = a.epochs[i];
    const auto& y = b.epochs[i];
    if (x.epoch != y.epoch || x.batch_size != y.batch_size || x.steps != y.steps || !same_bits(x.mean_loss, y.mean_loss) ||
        !same_bits(x.train_accuracy, y.train_accuracy) || !same_bits(x.test_accuracy, y.test_accuracy)) {
      return false;
    }
  }
  if (a.wall_clock_seconds.has_value() != b.wall_clock_seconds.has_value()) return false;
  if (a.wall_clock_seconds && !same_bits(*a.wall_clock_seconds, *b.wall_clock_seconds)) return false;
  return same_series(a.step_loss, b.step_loss) && same_table(a.ger, b.ger) && same_table(a.ler, b.ler) &&
         same_table(a.mad, b.mad);
}

MetricsFormat parse_metrics_format(const std::string& name) {
  if (name == "json") return MetricsFormat::Json;
  if (name == "csv") return MetricsFormat::Csv;
  throw ConfigError("unknown metrics format '" + name + "'; valid: json, csv");
}

std::string to_json(const MetricsRecord& r) {
  json j;
  j["experiment"] = r.experiment;
  j["seed"] = r.seed;
  j["config"] = r.config;
  j["initial_train_accuracy"] = number(r.initial_train_accuracy);
  j["initial_test_accuracy"] = number(r.initial_test_accuracy);
  json epochs = json::array();
  for (const auto& e : r.epochs) {
    epochs.push_back({{"epoch", e.epoch},
                      {"batch_size", e.batch_size},
                      {"steps", e.steps},
                      {"mean_loss", number(e.mean_loss)},
                      {"train_accuracy", number(e.train_accuracy)},
                      {"test_accuracy", number(e.test_accuracy)}});
  }
  j["epochs"] = epochs;
  j["step_loss"] = series(r.step_loss);
  j["ger"] = table(r.ger);
  j["ler"] = table(r.ler);
  j["mad"] = table(r.mad);
  if (r.wall_clock_seconds) j["wall_clock_seconds"] = *r.wall_clock_seconds;
  return j.dump(1) + "\n";
}

MetricsRecord from_json(const std::string& text) {
  MetricsRecord r;
  try {
    const json j = json::parse(text);
    r.experiment = j.at("experiment").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.config = j.at("config").get<std::map<std::string, std::string>>();
    r.initial_train_accuracy = number_from(j.at("initial_train_accuracy"));
    r.initial_test_accuracy = number_from(j.at("initial_test_accuracy"));
    for (const auto& e : j.at("epochs")) {
      r.epochs.push_back({e.at("epoch").get<int>(), e.at("batch_size").get<std::size_t>(),
                          e.at("steps").get<std::size_t>(), number_from(e.at("mean_loss")),
                          number_from(e.at("train_accuracy")), number_from(e.at("test_accuracy"))});
    }
    r.step_loss = series_from(j.at("step_loss"));
    r.ger = table_from(j.at("ger"));
    r.ler = table_from(j.at("ler"));
    r.mad = table_from(j.at("mad"));
    if (j.contains("wall_clock_seconds")) r.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
  } catch (const json::exception& e) {
    throw FormatError(std::string("metrics JSON: ") + e.what(), 0);
  }
  return r;
}

std::string to_csv(const MetricsRecord& r) {
  std::ostringstream out;
  out << "epoch,batch_size,steps,mean_loss,train_accuracy,test_accuracy\n";
  for (const auto& e : r.epochs) {
    out << e.epoch << ',' << e.batch_size << ',' << e.steps << ',' << g17(e.mean_loss) << ','
        << g17(e.train_accuracy) << ',' << g17(e.test_accuracy) << '\n';
  }
  return out.str();
}

void emit_metrics(const MetricsRecord& record, MetricsFormat format, const std::filesystem::path& path) {
  const std::string text = format == MetricsFormat::Json ? to_json(record) : to_csv(record);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

MetricsRecord read_metrics_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return from_json(buf.str());
}

}  // namespace lamina::harness
