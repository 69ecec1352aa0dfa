#include "lamina/tansaku/population.hpp"

namespace lamina::tansaku {

void Individual::set(const std::string& name, Matrix value) {
  fields_[name] = std::move(value);
  ++generation_;
}

const Matrix& Individual::get(const std::string& name) const {
  auto it = fields_.find(name);
  if (it == fields_.end()) throw IndexError("Individual: no field '" + name + "'");
  return it->second;
}

Matrix& Individual::mutate(const std::string& name) {
  auto it = fields_.find(name);
  if (it == fields_.end()) throw IndexError("Individual: no field '" + name + "'");
  ++generation_;
  return it->second;
}

std::vector<std::string> Individual::names() const {
  std::vector<std::string> out;
  out.reserve(fields_.size());
  for (const auto& [name, value] : fields_) out.push_back(name);
  return out;
}

void Individual::assess(Assessment a) {
  assessment_ = a;
  assessed_at_ = generation_;
}

const Assessment& Individual::assessment() const {
  if (!assessment_) throw MissingAssessmentError("Individual has no assessment");
  if (assessed_at_ != generation_) throw MissingAssessmentError("Individual assessment is stale");
  return *assessment_;
}

bool Individual::same_schema(const Individual& other) const {
  if (fields_.size() != other.fields_.size()) return false;
  auto a = fields_.begin();
  auto b = other.fields_.begin();
  for (; a != fields_.end(); ++a, ++b)
    if (a->first != b->first || !a->second.same_shape(b->second)) return false;
  return true;
}

Population::Population(std::vector<Individual> members) : members_(std::move(members)) {
  if (members_.empty()) throw ConfigError("Population: needs at least one member");
  for (std::size_t i = 1; i < members_.size(); ++i)
    if (!members_[i].same_schema(members_[0])) {
      throw ShapeError("Population: member " + std::to_string(i) + " does not match the schema of member 0");
    }
}

Population populate(const Individual& ind, std::size_t k) {
  if (k < 1) throw ConfigError("populate: k must be at least 1");
  Individual copy = ind;
  copy.clear_assessment();
  return Population(std::vector<Individual>(k, copy));
}

Population perturb_gaussian(const Population& pop, double std, Rng& rng, bool preserve_first) {
  if (!(std >= 0.0)) throw ConfigError("perturb_gaussian: std must be non-negative");
  Population out = pop;
  if (std == 0.0) return out;
  for (std::size_t i = preserve_first ? 1 : 0; i < out.size(); ++i) {
    Individual& member = out[i];
    for (const std::string& name : member.names()) {
      Matrix& m = member.mutate(name);
      for (double& v : m.data()) v += std * rng.normal();
    }
  }
  return out;
}

Population assess_population(const Population& pop, const Objective& objective) {
  Population out = pop;
  for (std::size_t i = 0; i < out.size(); ++i) {
    try {
      out[i].assess(objective(out[i]));
    } catch (const std::exception& e) {
      throw MemberError(i, e.what());
    }
  }
  return out;
}

Individual reduce_best(const Population& pop) {
  std::vector<Assessment> values;
  values.reserve(pop.size());
  for (std::size_t i = 0; i < pop.size(); ++i) {
    if (!pop[i].assessed()) {
      throw MissingAssessmentError("reduce_best: member " + std::to_string(i) + " is unassessed or stale");
    }
    values.push_back(pop[i].assessment());
  }
  return pop[kaku::best_index(values)];
}

Individual climb_hill(const Individual& ind, std::size_t k, double std, const Objective& objective, Rng& rng,
                      bool preserve_first) {
  return reduce_best(assess_population(perturb_gaussian(populate(ind, k), std, rng, preserve_first), objective));
}

}  // namespace lamina::tansaku
