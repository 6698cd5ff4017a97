#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rlve/environment.hpp"
#include "rlve/scheduler.hpp"
#include "rlve/types.hpp"

namespace rlve {

struct TrainingObservation {
  std::string env_id;
  DifficultyLevel difficulty = 0;
  bool had_mixed_rewards = false;
};

/// Anything that maps a problem to output text.
class PolicyModel {
 public:
  virtual ~PolicyModel() = default;

  virtual std::string respond(const ProblemInstance& instance, const RandomnessCoordinates& coords) = 0;

  /// `count` rollouts; rollout i uses instance.seed_path.child("rollout", i).
  virtual std::vector<std::string> respond_group(const ProblemInstance& instance, std::size_t count);

  virtual void observe_training(std::span<const TrainingObservation> observations) { (void)observations; }

  virtual std::optional<std::map<std::string, double>> skill_snapshot() const { return std::nullopt; }
};

struct SyntheticPolicyConfig {
  double initial_skill = 0.0;
  double width = 1.0;
  double learn_rate = 0.05;
  double format_error_prob = 0.0;
};

/// Skill-parameterised stand-in for a trained model. At difficulty d it
/// answers correctly with probability 1 / (1 + exp((d - s) / w)), otherwise
/// with the environment's near-miss.
class SyntheticPolicy final : public PolicyModel {
 public:
  /// Throws InvalidConfig on width <= 0, learn_rate < 0 or a format error
  /// probability outside [0, 1).
  SyntheticPolicy(const Registry& registry, SyntheticPolicyConfig config);

  std::string respond(const ProblemInstance& instance, const RandomnessCoordinates& coords) override;
  std::vector<std::string> respond_group(const ProblemInstance& instance, std::size_t count) override;
  void observe_training(std::span<const TrainingObservation> observations) override;
  std::optional<std::map<std::string, double>> skill_snapshot() const override;

  double skill(const std::string& env_id) const;
  void set_skill(const std::string& env_id, double skill) { skills_[env_id] = skill; }
  double success_probability(const std::string& env_id, DifficultyLevel d) const;
  const SyntheticPolicyConfig& config() const { return config_; }

  static constexpr const char* kFormatErrorText = "Sorry, I am not able to answer this.";

 private:
  enum class Kind { FormatError, Correct, NearMiss };
  Kind draw(const ProblemInstance& instance, const RandomnessCoordinates& coords) const;

  const Registry& registry_;
  SyntheticPolicyConfig config_;
  std::map<std::string, double> skills_;
};

/// Always answers with the reference answer.
class OraclePolicy final : public PolicyModel {
 public:
  std::string respond(const ProblemInstance& instance, const RandomnessCoordinates& coords) override;
};

double logistic_success(double d, double skill, double width);

struct RolloutGroup {
  ProblemInstance instance;
  std::vector<std::string> outputs;
  std::vector<double> rewards;
  bool mixed = false;
};

bool rewards_mixed(std::span<const double> rewards);

/// Fraction of groups whose rewards are not all identical; 0 for no groups.
double compute_effective_prompt_ratio(std::span<const RolloutGroup> groups);

struct StepMetrics {
  std::uint64_t step = 0;
  std::uint64_t sampled_prompts = 0;
  std::uint64_t mixed_prompts = 0;
  std::uint64_t kept_prompts = 0;
  double effective_prompt_ratio = 0.0;
  bool attempt_cap_hit = false;
  std::map<std::string, DifficultyLevel> per_env_high;
  std::map<std::string, DifficultyLevel> per_env_low;
  std::map<std::string, std::optional<double>> frontier_accuracy;
  std::optional<std::map<std::string, double>> policy_skill_snapshot;
};

Json to_json(const StepMetrics& m);

/// How tasks are drawn: through the adaptive scheduler or from a fixed
/// uniform range [0, range_high] (clamped to each environment's cap).
struct SamplingMode {
  bool adaptive = true;
  DifficultyLevel range_high = 0;

  static SamplingMode adaptive_mode() { return {}; }
  static SamplingMode static_mode(DifficultyLevel high) { return {false, high}; }
};

struct BatchConfig {
  std::size_t train_size = 128;
  std::size_t oversample_size = 384;
  std::uint32_t rollouts_per_problem = 16;
  /// Sampling stops after attempt_cap_factor * oversample_size prompts.
  std::size_t attempt_cap_factor = 10;
};

/// One sampled prompt as the scheduler saw it, for auditing.
struct SampledRecord {
  std::string env_id;
  DifficultyLevel difficulty = 0;
  DifficultyLevel high_at_sampling = 0;
  std::uint64_t correct = 0;
  std::uint64_t rollouts = 0;
  bool mixed = false;
  bool counted = false;
};

struct BatchResult {
  std::vector<RolloutGroup> kept;
  std::vector<SampledRecord> sampled;
  StepMetrics metrics;
  bool attempt_cap_exceeded = false;
};

/// Dynamic sampling: draws prompts in chunks of oversample_size, rolls each
/// out, scores it, feeds the outcome to the scheduler in sampling order, and
/// keeps mixed-reward groups until train_size are kept or the attempt cap is
/// reached. Only updates the scheduler in adaptive mode; never updates the
/// policy.
BatchResult collect_training_batch(SchedulerState& state, PolicyModel& policy, const Registry& registry,
                                   const BatchConfig& config, const SamplingMode& mode);

struct SimulationConfig {
  SamplingMode mode;
  std::vector<std::string> envs;
  std::uint64_t steps = 200;
  std::uint64_t master_seed = 0;
  SyntheticPolicyConfig policy;
  BatchConfig batch;
  SchedulerConfig scheduler = SchedulerConfig::defaults();

  /// Throws InvalidConfig.
  static SimulationConfig from_json(const Json& j);
  Json to_json() const;
};

struct SimulationResult {
  std::vector<StepMetrics> steps;
  std::map<std::string, DifficultyLevel> final_high;
  std::map<std::string, double> final_skill;
  SchedulerState final_state;

  double mean_final_skill() const;
};

/// Runs collect_training_batch followed by observe_training for the
/// configured number of steps. Deterministic in the config.
SimulationResult run_simulation(const SimulationConfig& config, const Registry& registry);

}  // namespace rlve
