#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rlve/rng.hpp"
#include "rlve/types.hpp"

namespace rlve {

/// When the accuracy/count thresholds are evaluated: after every
/// record_outcomes call, or only when check_thresholds is invoked (once per
/// training step).
enum class CheckTiming { PerCall, PerStep };

std::string_view check_timing_name(CheckTiming t);
std::optional<CheckTiming> parse_check_timing(std::string_view name);

struct SchedulerConfig {
  double tau_acc = 0.9;
  std::uint64_t tau_num = 128;
  std::uint32_t d_delta = 4;
  std::uint32_t rollouts_per_problem = 16;
  CheckTiming check_timing = CheckTiming::PerCall;

  /// tau_num = 8 * rollouts_per_problem.
  static SchedulerConfig defaults(std::uint32_t rollouts_per_problem = 16);
  /// Throws Error(InvalidConfig).
  void validate() const;

  bool operator==(const SchedulerConfig&) const = default;
};

struct DifficultyWindow {
  DifficultyLevel low = 0;
  DifficultyLevel high = 0;
  std::uint64_t correct = 0;
  std::uint64_t attempted = 0;
  /// The environment's maximum supported difficulty; high never passes it.
  std::optional<DifficultyLevel> ceiling;

  bool operator==(const DifficultyWindow&) const = default;
};

struct SchedulerState {
  std::map<std::string, DifficultyWindow, std::less<>> windows;
  SchedulerConfig config;
  std::uint64_t step_counter = 0;
  /// Sampling stream: next_task draws from (master_seed, "scheduler", counter).
  std::uint64_t master_seed = 0;
  std::uint64_t counter = 0;

  bool operator==(const SchedulerState&) const = default;
};

/// Throws EmptyEnvironmentSet, DuplicateEnvironmentId or InvalidConfig.
SchedulerState init_state(std::span<const std::string> env_ids, const SchedulerConfig& config,
                          std::uint64_t master_seed = 0,
                          const std::map<std::string, DifficultyLevel, std::less<>>& ceilings = {});

struct Task {
  std::string env_id;
  DifficultyLevel difficulty = 0;
  bool operator==(const Task&) const = default;
};

/// Environment uniformly, then difficulty uniformly over [low, high]. Pure.
Task sample_task(const SchedulerState& state, const RandomnessCoordinates& coords);

/// Coordinates of the next draw in the state's own stream; advances counter.
RandomnessCoordinates next_coordinates(SchedulerState& state);

bool is_correct_reward(double reward);

struct RecordResult {
  /// The outcomes were at the frontier and entered (correct, attempted).
  bool counted = false;
  /// The thresholds were checked and the counters reset.
  bool checked = false;
  bool advanced = false;
};

/// Frontier-only accounting followed, in per-call mode, by the threshold
/// check. Throws UnknownEnvironment or DifficultyAboveWindow.
RecordResult record_outcomes(SchedulerState& state, std::string_view env_id, DifficultyLevel d,
                             std::span<const double> rollout_rewards);

/// Threshold check for one window. Returns true when high advanced.
bool check_window(DifficultyWindow& window, const SchedulerConfig& config);
/// Threshold check for every window; returns the ids whose high advanced.
std::vector<std::string> check_thresholds(SchedulerState& state);

/// Uniform over [0, range_high]; stateless.
DifficultyLevel static_sample(DifficultyLevel range_high, const RandomnessCoordinates& coords);

Json to_json(const SchedulerConfig& config);
SchedulerConfig scheduler_config_from_json(const Json& j);
Json to_json(const DifficultyWindow& window);

}  // namespace rlve
