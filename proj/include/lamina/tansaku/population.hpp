#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lamina/errors.hpp"
#include "lamina/kaku/assessment.hpp"
#include "lamina/matrix.hpp"
#include "lamina/rng.hpp"

namespace lamina::tansaku {

using kaku::Assessment;

/// Named matrices plus an optional assessment. Any field change bumps the
/// generation, which makes an earlier assessment stale.
class Individual {
 public:
  Individual() = default;
  explicit Individual(std::map<std::string, Matrix> fields) : fields_(std::move(fields)) {}

  void set(const std::string& name, Matrix value);
  const Matrix& get(const std::string& name) const;
  /// Mutable access; counts as a mutation.
  Matrix& mutate(const std::string& name);
  bool contains(const std::string& name) const { return fields_.count(name) != 0; }
  const std::map<std::string, Matrix>& fields() const noexcept { return fields_; }
  std::vector<std::string> names() const;

  void assess(Assessment a);
  void clear_assessment() noexcept { assessment_.reset(); }
  /// True when an assessment exists and was made at the current generation.
  bool assessed() const noexcept { return assessment_ && assessed_at_ == generation_; }
  /// Throws MissingAssessmentError when missing or stale.
  const Assessment& assessment() const;
  std::uint64_t generation() const noexcept { return generation_; }

  /// Same field names and shapes.
  bool same_schema(const Individual& other) const;
  /// Field values equal (assessments ignored).
  bool same_fields(const Individual& other) const { return fields_ == other.fields_; }

 private:
  std::map<std::string, Matrix> fields_;
  std::optional<Assessment> assessment_;
  std::uint64_t generation_ = 0;
  std::uint64_t assessed_at_ = 0;
};

/// Non-empty group of individuals sharing one schema.
class Population {
 public:
  explicit Population(std::vector<Individual> members);

  std::size_t size() const noexcept { return members_.size(); }
  const Individual& operator[](std::size_t i) const { return members_.at(i); }
  Individual& operator[](std::size_t i) { return members_.at(i); }
  const std::vector<Individual>& members() const noexcept { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

 private:
  std::vector<Individual> members_;
};

/// An objective failed on one member; carries the member index.
class MemberError : public Error {
 public:
  MemberError(std::size_t index, const std::string& what)
      : Error("member " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

using Objective = std::function<Assessment(const Individual&)>;

/// k copies of `ind` with assessments cleared.
Population populate(const Individual& ind, std::size_t k);
/// Adds N(0, std²) noise to every entry of every field, member by member in
/// order, fields in name order. With preserve_first, member 0 is untouched.
Population perturb_gaussian(const Population& pop, double std, Rng& rng, bool preserve_first = true);
/// Assesses every member in index order.
Population assess_population(const Population& pop, const Objective& objective);
/// Best-assessed member; lowest index on ties.
Individual reduce_best(const Population& pop);
/// populate → perturb → assess → reduce.
Individual climb_hill(const Individual& ind, std::size_t k, double std, const Objective& objective, Rng& rng,
                      bool preserve_first = true);

}  // namespace lamina::tansaku
