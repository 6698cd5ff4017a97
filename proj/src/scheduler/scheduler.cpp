#include "rlve/scheduler.hpp"

#include <algorithm>
#include <set>

#include "rlve/error.hpp"

namespace rlve {

std::string_view check_timing_name(CheckTiming t) { return t == CheckTiming::PerCall ? "per_call" : "per_step"; }

std::optional<CheckTiming> parse_check_timing(std::string_view name) {
  if (name == "per_call") return CheckTiming::PerCall;
  if (name == "per_step") return CheckTiming::PerStep;
  return std::nullopt;
}

SchedulerConfig SchedulerConfig::defaults(std::uint32_t rollouts_per_problem) {
  SchedulerConfig c;
  c.rollouts_per_problem = rollouts_per_problem;
  c.tau_num = 8ULL * rollouts_per_problem;
  return c;
}

void SchedulerConfig::validate() const {
  if (!(tau_acc > 0.0 && tau_acc <= 1.0)) throw Error(ErrorCode::InvalidConfig, "tau_acc must lie in (0, 1]");
  if (tau_num == 0) throw Error(ErrorCode::InvalidConfig, "tau_num must be positive");
  if (d_delta <= 1) throw Error(ErrorCode::InvalidConfig, "d_delta must exceed 1");
  if (rollouts_per_problem == 0) throw Error(ErrorCode::InvalidConfig, "rollouts_per_problem must be positive");
}

SchedulerState init_state(std::span<const std::string> env_ids, const SchedulerConfig& config,
                          std::uint64_t master_seed,
                          const std::map<std::string, DifficultyLevel, std::less<>>& ceilings) {
  config.validate();
  if (env_ids.empty()) throw Error(ErrorCode::EmptyEnvironmentSet, "no environments given");
  SchedulerState state;
  state.config = config;
  state.master_seed = master_seed;
  for (const auto& id : env_ids) {
    if (state.windows.contains(id)) throw Error(ErrorCode::DuplicateEnvironmentId, id);
    DifficultyWindow w;
    if (auto it = ceilings.find(id); it != ceilings.end()) w.ceiling = it->second;
    state.windows.emplace(id, w);
  }
  return state;
}

Task sample_task(const SchedulerState& state, const RandomnessCoordinates& coords) {
  if (state.windows.empty()) throw Error(ErrorCode::EmptyEnvironmentSet, "scheduler has no windows");
  Rng rng(coords);
  auto it = state.windows.begin();
  std::advance(it, rng.uniform_int(0, static_cast<std::int64_t>(state.windows.size()) - 1));
  const auto& w = it->second;
  return Task{it->first, static_cast<DifficultyLevel>(rng.uniform_int(w.low, w.high))};
}

RandomnessCoordinates next_coordinates(SchedulerState& state) {
  return RandomnessCoordinates{state.master_seed, "scheduler", state.counter++};
}

bool is_correct_reward(double reward) { return reward >= 1.0 - 1e-9; }

bool check_window(DifficultyWindow& w, const SchedulerConfig& config) {
  if (w.attempted < config.tau_num) return false;
  bool advanced = false;
  const double accuracy = static_cast<double>(w.correct) / static_cast<double>(w.attempted);
  if (accuracy >= config.tau_acc && (!w.ceiling || w.high < *w.ceiling)) {
    ++w.high;
    if (w.high + 1 >= config.d_delta) w.low = std::max(w.low, w.high + 1 - config.d_delta);
    advanced = true;
  }
  w.correct = 0;
  w.attempted = 0;
  return advanced;
}

RecordResult record_outcomes(SchedulerState& state, std::string_view env_id, DifficultyLevel d,
                             std::span<const double> rollout_rewards) {
  auto it = state.windows.find(env_id);
  if (it == state.windows.end()) throw Error(ErrorCode::UnknownEnvironment, std::string(env_id));
  DifficultyWindow& w = it->second;
  if (d > w.high) {
    throw Error(ErrorCode::DifficultyAboveWindow,
                std::string(env_id) + ": difficulty " + std::to_string(d) + " above high " + std::to_string(w.high));
  }
  RecordResult result;
  if (d == w.high) {
    result.counted = true;
    w.attempted += rollout_rewards.size();
    w.correct += static_cast<std::uint64_t>(std::count_if(rollout_rewards.begin(), rollout_rewards.end(), is_correct_reward));
  }
  if (state.config.check_timing == CheckTiming::PerCall && w.attempted >= state.config.tau_num) {
    result.checked = true;
    result.advanced = check_window(w, state.config);
  }
  return result;
}

std::vector<std::string> check_thresholds(SchedulerState& state) {
  std::vector<std::string> advanced;
  for (auto& [id, w] : state.windows) {
    if (check_window(w, state.config)) advanced.push_back(id);
  }
  return advanced;
}

DifficultyLevel static_sample(DifficultyLevel range_high, const RandomnessCoordinates& coords) {
  Rng rng(coords);
  return static_cast<DifficultyLevel>(rng.uniform_int(0, range_high));
}

Json to_json(const SchedulerConfig& c) {
  return Json{{"tau_acc", c.tau_acc},
              {"tau_num", c.tau_num},
              {"d_delta", c.d_delta},
              {"rollouts_per_problem", c.rollouts_per_problem},
              {"check_timing", check_timing_name(c.check_timing)}};
}

SchedulerConfig scheduler_config_from_json(const Json& j) {
  SchedulerConfig c = SchedulerConfig::defaults(j.value("rollouts_per_problem", 16u));
  c.tau_acc = j.value("tau_acc", c.tau_acc);
  c.tau_num = j.value("tau_num", c.tau_num);
  c.d_delta = j.value("d_delta", c.d_delta);
  if (j.contains("check_timing")) {
    auto t = parse_check_timing(j.at("check_timing").get<std::string>());
    if (!t) throw Error(ErrorCode::InvalidConfig, "check_timing must be per_call or per_step");
    c.check_timing = *t;
  }
  return c;
}

Json to_json(const DifficultyWindow& w) {
  Json j{{"low", w.low}, {"high", w.high}, {"correct", w.correct}, {"attempted", w.attempted}};
  j["ceiling"] = w.ceiling ? Json(*w.ceiling) : Json(nullptr);
  return j;
}

}  // namespace rlve
