#include "lamina/harness/dataset.hpp"

#include <algorithm>
#include <cstdlib>

#include "lamina/errors.hpp"
#include "lamina/harness/idx.hpp"
#include "lamina/rng.hpp"

#ifndef LAMINA_DEFAULT_DATA_DIR
#define LAMINA_DEFAULT_DATA_DIR "data/mnist"
#endif

namespace lamina::harness {

Dataset Dataset::subset(std::span<const std::size_t> rows) const {
  return {gather_rows(x, rows), gather_rows(y, rows), n_classes};
}

Dataset load_mnist(const std::filesystem::path& dir) {
  LabeledImages raw = load_idx_pair(dir / "train-images-idx3-ubyte", dir / "train-labels-idx1-ubyte");
  Dataset d;
  d.x = std::move(raw.images);
  d.y = Matrix(raw.labels.size(), 1);
  for (std::size_t i = 0; i < raw.labels.size(); ++i) d.y(i, 0) = raw.labels[i];
  d.n_classes = 10;
  return d;
}

Split split_subsets(const Dataset& full, std::size_t n_train, std::size_t n_test, std::uint64_t seed) {
  if (n_train + n_test > full.size()) {
    throw ConfigError("requested " + std::to_string(n_train) + " train + " + std::to_string(n_test) +
                      " test samples from a dataset of " + std::to_string(full.size()));
  }
  Rng rng = Rng(seed).split("subset");
  const auto order = permutation(rng, full.size());
  const std::span<const std::size_t> all(order);
  return {full.subset(all.first(n_train)), full.subset(all.subspan(n_train, n_test))};
}

Dataset make_blobs(std::size_t n, std::size_t n_classes, std::size_t dims, double separation, std::uint64_t seed) {
  if (n_classes < 1 || dims < n_classes) throw ConfigError("make_blobs: need dims >= n_classes >= 1");
  Rng rng = Rng(seed).split("blobs");
  Dataset d;
  d.x = gaussian(rng, n, dims, 0.0, 1.0);
  d.y = Matrix(n, 1);
  d.n_classes = n_classes;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t c = i % n_classes;
    d.y(i, 0) = static_cast<double>(c);
    d.x(i, c) += separation;
  }
  return d;
}

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("LAMINA_DATA_DIR"); env != nullptr && *env != '\0') return env;
  return LAMINA_DEFAULT_DATA_DIR;
}

}  // namespace lamina::harness
