#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "lamina/errors.hpp"
#include "lamina/harness/config.hpp"
#include "lamina/harness/dataset.hpp"
#include "lamina/harness/experiment.hpp"
#include "lamina/harness/idx.hpp"
#include "lamina/harness/metrics.hpp"
#include "lamina/kikai.hpp"
#include "lamina/layers.hpp"

using namespace lamina;
using namespace lamina::harness;

namespace {

void put_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) out.push_back(static_cast<std::uint8_t>(v >> shift));
}

std::vector<std::uint8_t> image_file(std::uint32_t n, const std::vector<std::uint8_t>& pixels) {
  std::vector<std::uint8_t> out;
  put_be32(out, kIdxImagesMagic);
  put_be32(out, n);
  put_be32(out, 3);
  put_be32(out, 3);
  out.insert(out.end(), pixels.begin(), pixels.end());
  return out;
}

std::vector<std::uint8_t> label_file(const std::vector<std::uint8_t>& labels) {
  std::vector<std::uint8_t> out;
  put_be32(out, kIdxLabelsMagic);
  put_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::filesystem::path write_temp(const std::string& name, const std::vector<std::uint8_t>& bytes) {
  const auto path = std::filesystem::temp_directory_path() / ("lamina_test_" + name);
  std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()),
                                              static_cast<std::streamsize>(bytes.size()));
  return path;
}

Split blobs(std::uint64_t seed) {
  const Dataset full = make_blobs(1200, 10, 20, 8.0, seed);
  return split_subsets(full, 1000, 200, seed);
}

ExperimentConfig blob_baseline(int epochs) {
  ExperimentConfig c = defaults_for("baseline");
  c.epochs = epochs;
  c.train_subset = 1000;
  c.test_subset = 200;
  c.batch_size = 50;
  c.lr = 1e-2;
  return c;
}

}  // namespace

// --- IDX --------------------------------------------------------------------------

TEST(Idx, HandcraftedTwoImages) {
  std::vector<std::uint8_t> pixels(18);
  for (std::size_t i = 0; i < 18; ++i) pixels[i] = static_cast<std::uint8_t>(i * 15);
  const Matrix m = parse_idx_images(image_file(2, pixels));
  ASSERT_EQ(m.rows(), 2u);
  ASSERT_EQ(m.cols(), 9u);
  EXPECT_EQ(m(0, 0), 0.0);
  EXPECT_EQ(m(1, 8), 255.0 / 255.0);
  EXPECT_EQ(m(1, 0), 135.0 / 255.0);
  EXPECT_EQ(parse_idx_labels(label_file({7, 3})), (std::vector<std::uint8_t>{7, 3}));
}

TEST(Idx, CountMismatchBetweenFiles) {
  const auto images = write_temp("images", image_file(2, std::vector<std::uint8_t>(18)));
  const auto labels = write_temp("labels", label_file({1, 2, 3}));
  EXPECT_THROW(load_idx_pair(images, labels), FormatError);
  std::filesystem::remove(images);
  std::filesystem::remove(labels);
}

TEST(Idx, EmptyBufferFailsAtOffsetZero) {
  try {
    parse_idx_images({});
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 0u);
  }
}

TEST(Idx, WrongMagic) {
  EXPECT_THROW(parse_idx_images(label_file({1})), FormatError);
  EXPECT_THROW(parse_idx_labels(image_file(1, std::vector<std::uint8_t>(9))), FormatError);
}

TEST(Idx, TruncatedPixels) {
  try {
    parse_idx_images(image_file(2, std::vector<std::uint8_t>(10)));
    FAIL() << "expected FormatError";
  } catch (const FormatError& e) {
    EXPECT_EQ(e.offset(), 26u);
  }
}

TEST(Idx, MissingFile) {
  EXPECT_THROW(load_idx_images("/nonexistent/lamina/images"), IoError);
}

// --- config -----------------------------------------------------------------------

TEST(Config, SettingsRoundTrip) {
  for (const auto& name : experiment_names()) {
    ExperimentConfig c = defaults_for(name);
    c.seed = 42;
    c.lr = 0.1;
    c.dropout_final_p = 0.25;
    std::ostringstream text;
    for (const auto& [k, v] : settings(c)) text << k << " = " << v << "\n";
    const ExperimentConfig back = parse_config(text.str());
    EXPECT_EQ(settings(back), settings(c)) << name;
  }
}

TEST(Config, ShippedFilesMatchDefaults) {
  const std::filesystem::path dir = LAMINA_CONFIG_SOURCE_DIR;
  for (const auto& name : experiment_names()) {
    const auto path = dir / (name + ".conf");
    ASSERT_TRUE(std::filesystem::exists(path)) << path;
    EXPECT_EQ(settings(load_config_file(path)), settings(defaults_for(name))) << name;
  }
}

TEST(Config, UnknownExperimentListsValidNames) {
  try {
    defaults_for("nope");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    for (const auto& name : experiment_names()) EXPECT_NE(std::string(e.what()).find(name), std::string::npos);
  }
}

TEST(Config, MalformedInput) {
  ExperimentConfig c;
  EXPECT_THROW(apply_setting(c, "no_such_key", "1"), ConfigError);
  EXPECT_THROW(apply_setting(c, "epochs", "many"), ConfigError);
  EXPECT_THROW(parse_config("epochs 5"), ConfigError);
}

TEST(Config, ExperimentKeySelectsDefaultsWherever) {
  const ExperimentConfig c = parse_config("epochs = 2\nexperiment = fa\n");
  EXPECT_EQ(c.name, "fa");
  EXPECT_EQ(c.epochs, 2);
  EXPECT_EQ(c.optimizer, defaults_for("fa").optimizer);
}

TEST(Config, DoublingSchedule) {
  ExperimentConfig c;
  c.batch_size = 64;
  c.batch_schedule = BatchSchedule::Doubling;
  c.batch_double_every = 2;
  c.batch_max = 200;
  EXPECT_EQ(c.batch_size_for(1), 64u);
  EXPECT_EQ(c.batch_size_for(2), 64u);
  EXPECT_EQ(c.batch_size_for(3), 128u);
  EXPECT_EQ(c.batch_size_for(5), 200u);
}

// --- metrics ------------------------------------------------------------------------

TEST(Metrics, JsonRoundTripIsExact) {
  MetricsRecord r;
  r.experiment = "baseline";
  r.seed = 7;
  r.config = settings(defaults_for("baseline"));
  r.initial_test_accuracy = 0.1;
  r.epochs.push_back({1, 128, 63, 1.0 / 3.0, 0.9123456789012345, std::nextafter(0.9, 1.0)});
  r.step_loss = {2.302585092994046, 1e-300, 5e-324};
  r.ger = {{0.1, -0.2}};
  r.ler = {{0.3, 0.4}};
  r.mad = {{std::nan(""), 1.5}};
  EXPECT_TRUE(identical(from_json(to_json(r)), r));
  EXPECT_EQ(to_json(r).find("wall_clock"), std::string::npos);
}

TEST(Metrics, CsvHasOneRowPerEpoch) {
  MetricsRecord r;
  for (int e = 1; e <= 3; ++e) r.epochs.push_back({e, 128, 10, 0.5, 0.5, 1.0 / 3.0});
  const std::string csv = to_csv(r);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);
}

TEST(Metrics, UnknownFormat) { EXPECT_THROW(parse_metrics_format("xml"), ConfigError); }

// --- datasets and runs ------------------------------------------------------------------

TEST(Dataset, SplitIsDisjointAndSized) {
  const Dataset full = make_blobs(300, 3, 4, 2.0, 1);
  // Tag every row with its index so the subsets can be traced back.
  Dataset tagged = full;
  for (std::size_t i = 0; i < tagged.size(); ++i) tagged.x(i, 0) = static_cast<double>(i);
  const Split s = split_subsets(tagged, 200, 100, 5);
  ASSERT_EQ(s.train.size(), 200u);
  ASSERT_EQ(s.test.size(), 100u);
  std::set<double> seen;
  for (std::size_t i = 0; i < 200; ++i) seen.insert(s.train.x(i, 0));
  for (std::size_t i = 0; i < 100; ++i) EXPECT_EQ(seen.count(s.test.x(i, 0)), 0u);
  EXPECT_THROW(split_subsets(full, 250, 100, 5), ConfigError);
}

TEST(Run, BaselineSeparatesBlobs) {
  const MetricsRecord r = run_experiment(blob_baseline(3), blobs(3));
  ASSERT_EQ(r.epochs.size(), 3u);
  EXPECT_EQ(r.epochs.back().train_accuracy, 1.0);
}

TEST(Run, ZeroEpochsIsChance) {
  const MetricsRecord r = run_experiment(blob_baseline(0), blobs(4));
  EXPECT_TRUE(r.epochs.empty());
  EXPECT_NEAR(r.final_test_accuracy(), 0.1, 0.05);
}

TEST(Run, SameSeedSameRecord) {
  ExperimentConfig c = blob_baseline(2);
  c.diagnostics = true;
  const MetricsRecord a = run_experiment(c, blobs(5));
  const MetricsRecord b = run_experiment(c, blobs(5));
  EXPECT_TRUE(identical(a, b));
  EXPECT_FALSE(a.ger.empty());
}

TEST(Run, ErrorReductionsMatchRecomputation) {
  using kaku::IO;
  Rng rng(6);
  layers::Sequential a, b;
  a.add<layers::Linear>(5, 4, rng);
  a.add<layers::Relu>();
  b.add<layers::Linear>(4, 3, rng);
  std::vector<std::unique_ptr<kaku::LearningMachine>> ls;
  ls.push_back(std::make_unique<kikai::GradLearner>(a, kaku::Criterion::sse(), kaku::Optimizer::adam(1e-2)));
  ls.push_back(std::make_unique<kikai::GradLearner>(b, kaku::Criterion::cross_entropy(), kaku::Optimizer::adam(1e-2)));
  kikai::StackedLearner stack(std::move(ls), kaku::Criterion::cross_entropy());
  stack.set_diagnostics(true);
  const auto before = stack.clone();
  const auto& pre = dynamic_cast<const kikai::StackedLearner&>(*before);
  const IO x(gaussian(rng, 8, 5, 0.0, 1.0));
  const IO t(Matrix{{0}, {1}, {2}, {0}, {1}, {2}, {0}, {1}});
  const auto m = stack.train_step(x, t);

  const auto ce = [&](const IO& y) { return kaku::Criterion::cross_entropy().loss(y.f(), t.f()); };
  const IO h_pre = pre.layer(0).infer(x), h_post = stack.layer(0).infer(x);
  // The output layer steps first, on the old hidden activations.
  EXPECT_NEAR(m.ger[1], ce(pre.layer(1).infer(h_pre)) - ce(stack.layer(1).infer(h_pre)), 1e-10);
  // The hidden layer is judged through the already-updated output layer.
  EXPECT_NEAR(m.ger[0], ce(stack.layer(1).infer(h_pre)) - ce(stack.layer(1).infer(h_post)), 1e-10);
}
