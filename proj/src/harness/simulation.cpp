#include <numeric>

#include "rlve/envs.hpp"
#include "rlve/error.hpp"
#include "rlve/harness.hpp"

namespace rlve {

namespace {

template <class T>
T read(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("field '") + key + "': " + e.what());
  }
}

}  // namespace

SimulationConfig SimulationConfig::from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorCode::InvalidConfig, "simulation config must be an object");
  SimulationConfig c;
  const std::string mode = read<std::string>(j, "mode", "adaptive");
  if (mode == "adaptive") {
    c.mode = SamplingMode::adaptive_mode();
  } else if (mode == "static") {
    c.mode = SamplingMode::static_mode(read<DifficultyLevel>(j, "range_high", 0));
  } else {
    throw Error(ErrorCode::InvalidConfig, "mode must be adaptive or static");
  }
  c.envs = read<std::vector<std::string>>(j, "envs", default_simulation_envs());
  c.steps = read<std::uint64_t>(j, "steps", c.steps);
  c.master_seed = read<std::uint64_t>(j, "master_seed", c.master_seed);

  const Json policy = j.value("policy", Json::object());
  c.policy.initial_skill = read<double>(policy, "initial_skill", c.policy.initial_skill);
  c.policy.width = read<double>(policy, "width", c.policy.width);
  c.policy.learn_rate = read<double>(policy, "learn_rate", c.policy.learn_rate);
  c.policy.format_error_prob = read<double>(policy, "format_error_prob", c.policy.format_error_prob);

  const Json batch = j.value("batch", Json::object());
  c.batch.train_size = read<std::size_t>(batch, "train_size", c.batch.train_size);
  c.batch.oversample_size = read<std::size_t>(batch, "oversample_size", c.batch.oversample_size);
  c.batch.rollouts_per_problem = read<std::uint32_t>(batch, "rollouts_per_problem", c.batch.rollouts_per_problem);
  c.batch.attempt_cap_factor = read<std::size_t>(batch, "attempt_cap_factor", c.batch.attempt_cap_factor);
  if (c.batch.train_size > c.batch.oversample_size) {
    throw Error(ErrorCode::InvalidConfig, "train_size exceeds oversample_size");
  }

  Json sched = j.value("scheduler", Json::object());
  sched["rollouts_per_problem"] = c.batch.rollouts_per_problem;
  try {
    c.scheduler = scheduler_config_from_json(sched);
  } catch (const Error&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("scheduler: ") + e.what());
  }
  c.scheduler.validate();
  return c;
}

Json SimulationConfig::to_json() const {
  Json j{{"mode", mode.adaptive ? "adaptive" : "static"}};
  if (!mode.adaptive) j["range_high"] = mode.range_high;
  j["envs"] = envs;
  j["steps"] = steps;
  j["master_seed"] = master_seed;
  j["policy"] = Json{{"initial_skill", policy.initial_skill},
                     {"width", policy.width},
                     {"learn_rate", policy.learn_rate},
                     {"format_error_prob", policy.format_error_prob}};
  j["batch"] = Json{{"train_size", batch.train_size},
                    {"oversample_size", batch.oversample_size},
                    {"rollouts_per_problem", batch.rollouts_per_problem},
                    {"attempt_cap_factor", batch.attempt_cap_factor}};
  j["scheduler"] = rlve::to_json(scheduler);
  // The batch setting wins, as in run_simulation.
  j["scheduler"]["rollouts_per_problem"] = batch.rollouts_per_problem;
  return j;
}

double SimulationResult::mean_final_skill() const {
  if (final_skill.empty()) return 0.0;
  double total = 0.0;
  for (const auto& [id, s] : final_skill) total += s;
  return total / static_cast<double>(final_skill.size());
}

SimulationResult run_simulation(const SimulationConfig& config, const Registry& registry) {
  if (config.envs.empty()) throw Error(ErrorCode::EmptyEnvironmentSet, "simulation names no environments");
  std::map<std::string, DifficultyLevel, std::less<>> ceilings;
  for (const auto& id : config.envs) ceilings[id] = registry.at(id).descriptor().max_supported_difficulty;

  SchedulerConfig sched = config.scheduler;
  sched.rollouts_per_problem = config.batch.rollouts_per_problem;
  SchedulerState state = init_state(config.envs, sched, config.master_seed, ceilings);
  SyntheticPolicy policy(registry, config.policy);

  SimulationResult result;
  result.steps.reserve(config.steps);
  for (std::uint64_t step = 0; step < config.steps; ++step) {
    BatchResult batch = collect_training_batch(state, policy, registry, config.batch, config.mode);
    std::vector<TrainingObservation> observations;
    observations.reserve(batch.sampled.size());
    for (const auto& r : batch.sampled) observations.push_back({r.env_id, r.difficulty, r.mixed});
    policy.observe_training(observations);

    std::map<std::string, double> skills;
    for (const auto& id : config.envs) skills[id] = policy.skill(id);
    batch.metrics.policy_skill_snapshot = skills;
    result.steps.push_back(std::move(batch.metrics));
  }
  for (const auto& id : config.envs) {
    result.final_skill[id] = policy.skill(id);
    if (config.mode.adaptive) result.final_high[id] = state.windows.at(id).high;
  }
  result.final_state = std::move(state);
  return result;
}

}  // namespace rlve
