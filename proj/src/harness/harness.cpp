#include <algorithm>
#include <unordered_map>

#include "rlve/error.hpp"
#include "rlve/harness.hpp"

namespace rlve {

bool rewards_mixed(std::span<const double> rewards) {
  if (rewards.empty()) return false;
  const auto [lo, hi] = std::minmax_element(rewards.begin(), rewards.end());
  return *lo != *hi;
}

double compute_effective_prompt_ratio(std::span<const RolloutGroup> groups) {
  if (groups.empty()) return 0.0;
  const auto mixed = std::count_if(groups.begin(), groups.end(), [](const RolloutGroup& g) { return g.mixed; });
  return static_cast<double>(mixed) / static_cast<double>(groups.size());
}

Json to_json(const StepMetrics& m) {
  Json j{{"step", m.step},
         {"sampled_prompts", m.sampled_prompts},
         {"mixed_prompts", m.mixed_prompts},
         {"kept_prompts", m.kept_prompts},
         {"effective_prompt_ratio", m.effective_prompt_ratio},
         {"attempt_cap_hit", m.attempt_cap_hit}};
  j["per_env_high"] = Json::object();
  for (const auto& [id, h] : m.per_env_high) j["per_env_high"][id] = h;
  j["per_env_low"] = Json::object();
  for (const auto& [id, l] : m.per_env_low) j["per_env_low"][id] = l;
  j["frontier_accuracy"] = Json::object();
  for (const auto& [id, a] : m.frontier_accuracy) j["frontier_accuracy"][id] = a ? Json(*a) : Json(nullptr);
  if (m.policy_skill_snapshot) {
    j["policy_skill_snapshot"] = Json::object();
    for (const auto& [id, s] : *m.policy_skill_snapshot) j["policy_skill_snapshot"][id] = s;
  } else {
    j["policy_skill_snapshot"] = nullptr;
  }
  return j;
}

namespace {

Task draw_task(const SchedulerState& state, const Registry& registry, const SamplingMode& mode,
               const RandomnessCoordinates& coords) {
  if (mode.adaptive) return sample_task(state, coords);
  Rng rng(coords);
  auto it = state.windows.begin();
  std::advance(it, rng.uniform_int(0, static_cast<std::int64_t>(state.windows.size()) - 1));
  const DifficultyLevel cap = registry.at(it->first).descriptor().max_supported_difficulty;
  const DifficultyLevel d = static_sample(mode.range_high, coords.child("static", 0));
  return Task{it->first, std::min(d, cap)};
}

// Scores a group, verifying each distinct output once.
std::vector<double> score_group(const Environment& env, const ProblemInstance& instance,
                                const std::vector<std::string>& outputs) {
  std::unordered_map<std::string, double> memo;
  std::vector<double> rewards;
  rewards.reserve(outputs.size());
  for (const auto& out : outputs) {
    auto it = memo.find(out);
    if (it == memo.end()) it = memo.emplace(out, env.verify(instance, out).reward).first;
    rewards.push_back(it->second);
  }
  return rewards;
}

}  // namespace

BatchResult collect_training_batch(SchedulerState& state, PolicyModel& policy, const Registry& registry,
                                   const BatchConfig& config, const SamplingMode& mode) {
  if (config.train_size > config.oversample_size) {
    throw Error(ErrorCode::InvalidConfig, "train_size exceeds oversample_size");
  }
  if (state.windows.empty()) throw Error(ErrorCode::EmptyEnvironmentSet, "scheduler has no windows");
  BatchResult result;
  const std::size_t cap = config.attempt_cap_factor * config.oversample_size;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> frontier;  // correct, total

  while (result.kept.size() < config.train_size && result.sampled.size() < cap && config.oversample_size > 0) {
    for (std::size_t i = 0; i < config.oversample_size && result.sampled.size() < cap; ++i) {
      const RandomnessCoordinates coords = next_coordinates(state);
      const Task task = draw_task(state, registry, mode, coords);
      const Environment& env = registry.at(task.env_id);
      const RandomnessCoordinates problem_coords{state.master_seed, task.env_id, coords.counter};

      RolloutGroup group;
      group.instance = env.generate(task.difficulty, problem_coords);
      group.outputs = policy.respond_group(group.instance, config.rollouts_per_problem);
      group.rewards = score_group(env, group.instance, group.outputs);
      group.mixed = rewards_mixed(group.rewards);

      SampledRecord record;
      record.env_id = task.env_id;
      record.difficulty = task.difficulty;
      record.high_at_sampling = state.windows.at(task.env_id).high;
      record.rollouts = group.rewards.size();
      record.correct = static_cast<std::uint64_t>(std::count_if(group.rewards.begin(), group.rewards.end(), is_correct_reward));
      record.mixed = group.mixed;
      if (mode.adaptive) {
        if (record.difficulty == record.high_at_sampling) {
          auto& f = frontier[task.env_id];
          f.first += record.correct;
          f.second += record.rollouts;
        }
        record.counted = record_outcomes(state, task.env_id, task.difficulty, group.rewards).counted;
      }
      result.sampled.push_back(std::move(record));
      if (group.mixed && result.kept.size() < config.train_size) result.kept.push_back(std::move(group));
    }
  }

  if (mode.adaptive && state.config.check_timing == CheckTiming::PerStep) check_thresholds(state);

  auto& m = result.metrics;
  m.step = state.step_counter++;
  m.sampled_prompts = result.sampled.size();
  m.mixed_prompts = static_cast<std::uint64_t>(
      std::count_if(result.sampled.begin(), result.sampled.end(), [](const SampledRecord& r) { return r.mixed; }));
  m.kept_prompts = result.kept.size();
  m.effective_prompt_ratio =
      m.sampled_prompts == 0 ? 0.0 : static_cast<double>(m.mixed_prompts) / static_cast<double>(m.sampled_prompts);
  result.attempt_cap_exceeded = result.kept.size() < config.train_size;
  m.attempt_cap_hit = result.attempt_cap_exceeded;
  if (mode.adaptive) {
    for (const auto& [id, w] : state.windows) {
      m.per_env_high[id] = w.high;
      m.per_env_low[id] = w.low;
      auto it = frontier.find(id);
      m.frontier_accuracy[id] = it == frontier.end() || it->second.second == 0
                                    ? std::nullopt
                                    : std::optional<double>(static_cast<double>(it->second.first) /
                                                            static_cast<double>(it->second.second));
    }
  }
  m.policy_skill_snapshot = policy.skill_snapshot();
  return result;
}

}  // namespace rlve
