#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "lamina/matrix.hpp"

namespace lamina::harness {

/// Flattened samples with a [n, 1] label column.
struct Dataset {
  Matrix x;
  Matrix y;
  std::size_t n_classes = 0;

  std::size_t size() const noexcept { return x.rows(); }
  Dataset subset(std::span<const std::size_t> rows) const;
};

struct Split {
  Dataset train;
  Dataset test;
};

/// MNIST training images and labels from an IDX directory.
Dataset load_mnist(const std::filesystem::path& dir);

/// Disjoint train/test subsets: the first n_train entries of a seeded
/// permutation go to train, the next n_test to test.
Split split_subsets(const Dataset& full, std::size_t n_train, std::size_t n_test, std::uint64_t seed);

/// Gaussian blobs: class c is centered at `separation`·e_c (dims ≥ n_classes)
/// with unit noise, classes balanced.
Dataset make_blobs(std::size_t n, std::size_t n_classes, std::size_t dims, double separation, std::uint64_t seed);

/// LAMINA_DATA_DIR if set, else the build-time default.
std::filesystem::path default_data_dir();

}  // namespace lamina::harness
