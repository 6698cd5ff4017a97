#include <cmath>

#include "rlve/error.hpp"
#include "rlve/harness.hpp"

namespace rlve {

double logistic_success(double d, double skill, double width) { return 1.0 / (1.0 + std::exp((d - skill) / width)); }

std::vector<std::string> PolicyModel::respond_group(const ProblemInstance& instance, std::size_t count) {
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(respond(instance, instance.seed_path.child("rollout", i)));
  return out;
}

SyntheticPolicy::SyntheticPolicy(const Registry& registry, SyntheticPolicyConfig config)
    : registry_(registry), config_(config) {
  if (!(config_.width > 0)) throw Error(ErrorCode::InvalidConfig, "policy width must be positive");
  if (!(config_.learn_rate >= 0)) throw Error(ErrorCode::InvalidConfig, "learn_rate must be non-negative");
  if (!(config_.format_error_prob >= 0 && config_.format_error_prob < 1)) {
    throw Error(ErrorCode::InvalidConfig, "format_error_prob must lie in [0, 1)");
  }
}

double SyntheticPolicy::skill(const std::string& env_id) const {
  auto it = skills_.find(env_id);
  return it == skills_.end() ? config_.initial_skill : it->second;
}

double SyntheticPolicy::success_probability(const std::string& env_id, DifficultyLevel d) const {
  return logistic_success(static_cast<double>(d), skill(env_id), config_.width);
}

SyntheticPolicy::Kind SyntheticPolicy::draw(const ProblemInstance& instance, const RandomnessCoordinates& coords) const {
  Rng rng(coords);
  const double u_format = rng.uniform01();
  const double u_correct = rng.uniform01();
  if (u_format < config_.format_error_prob) return Kind::FormatError;
  return u_correct < success_probability(instance.env_id, instance.difficulty) ? Kind::Correct : Kind::NearMiss;
}

std::string SyntheticPolicy::respond(const ProblemInstance& instance, const RandomnessCoordinates& coords) {
  if (!instance.reference_answer) throw Error(ErrorCode::MissingReference, instance.env_id);
  switch (draw(instance, coords)) {
    case Kind::FormatError: return kFormatErrorText;
    case Kind::Correct: return *instance.reference_answer;
    case Kind::NearMiss: return registry_.at(instance.env_id).near_miss(instance);
  }
  return kFormatErrorText;
}

// Same draws as respond(), with the near-miss computed at most once.
std::vector<std::string> SyntheticPolicy::respond_group(const ProblemInstance& instance, std::size_t count) {
  if (!instance.reference_answer) throw Error(ErrorCode::MissingReference, instance.env_id);
  std::optional<std::string> near_miss;
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    switch (draw(instance, instance.seed_path.child("rollout", i))) {
      case Kind::FormatError: out.emplace_back(kFormatErrorText); break;
      case Kind::Correct: out.push_back(*instance.reference_answer); break;
      case Kind::NearMiss:
        if (!near_miss) near_miss = registry_.at(instance.env_id).near_miss(instance);
        out.push_back(*near_miss);
        break;
    }
  }
  return out;
}

void SyntheticPolicy::observe_training(std::span<const TrainingObservation> observations) {
  for (const auto& o : observations) {
    if (o.had_mixed_rewards) skills_[o.env_id] = skill(o.env_id) + config_.learn_rate;
  }
}

std::optional<std::map<std::string, double>> SyntheticPolicy::skill_snapshot() const { return skills_; }

std::string OraclePolicy::respond(const ProblemInstance& instance, const RandomnessCoordinates&) {
  if (!instance.reference_answer) throw Error(ErrorCode::MissingReference, instance.env_id);
  return *instance.reference_answer;
}

}  // namespace rlve
