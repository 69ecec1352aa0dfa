#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "lamina/matrix.hpp"

namespace lamina {

/// SplitMix64 stream. The generator is a 64-bit counter advanced by the golden
/// ratio constant and passed through the SplitMix64 finalizer, so the sequence
/// depends only on the seed and is identical on every platform.
///
/// Child streams come from split(label): the child seed hashes the parent's
/// construction seed with the label (FNV-1a), independent of how many draws the
/// parent has made.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : seed_(seed), counter_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  std::uint64_t next_u64();
  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n) by rejection sampling; n must be positive.
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

  Rng split(std::string_view label) const;
  Rng split(std::uint64_t index) const;

  friend bool operator==(const Rng&, const Rng&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

/// i.i.d. N(mean, std²) entries. std must be non-negative.
Matrix gaussian(Rng& rng, std::size_t rows, std::size_t cols, double mean, double std);
Matrix uniform_matrix(Rng& rng, std::size_t rows, std::size_t cols, double lo, double hi);

/// Fisher-Yates permutation of [0, n).
std::vector<std::size_t> permutation(Rng& rng, std::size_t n);

}  // namespace lamina
