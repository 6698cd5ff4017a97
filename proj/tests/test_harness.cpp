#include <doctest.h>

#include <cmath>

#include "rlve/envs.hpp"
#include "rlve/error.hpp"
#include "rlve/harness.hpp"

using namespace rlve;

namespace {

const Registry& registry() {
  static const Registry r = make_default_registry();
  return r;
}

// Correct with probability one half, independently per rollout.
class CoinPolicy final : public PolicyModel {
 public:
  std::string respond(const ProblemInstance& instance, const RandomnessCoordinates& coords) override {
    Rng rng(coords);
    return rng.bernoulli(0.5) ? *instance.reference_answer : "no idea";
  }
};

SchedulerState state_for(std::vector<std::string> ids, std::uint64_t seed = 1) {
  return init_state(ids, SchedulerConfig::defaults(), seed);
}

BatchConfig small_batch() {
  BatchConfig b;
  b.train_size = 16;
  b.oversample_size = 48;
  b.rollouts_per_problem = 8;
  b.attempt_cap_factor = 4;
  return b;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("effective prompt ratio") {
  std::vector<RolloutGroup> groups(3);
  groups[0].rewards = {1, 1};
  groups[1].rewards = {1, 0};
  groups[2].rewards = {0, 0};
  for (auto& g : groups) g.mixed = rewards_mixed(g.rewards);
  CHECK(compute_effective_prompt_ratio(groups) == doctest::Approx(1.0 / 3.0));
  CHECK(compute_effective_prompt_ratio({}) == 0.0);
  CHECK_FALSE(rewards_mixed(std::vector<double>{}));
  CHECK(rewards_mixed(std::vector<double>{0.5, 0.25}));
}

TEST_CASE("logistic success curve") {
  CHECK(logistic_success(0, 2, 1) == doctest::Approx(1.0 / (1.0 + std::exp(-2.0))).epsilon(1e-12));
  CHECK(logistic_success(3, 2, 1) == doctest::Approx(0.2689).epsilon(1e-3));
  CHECK(logistic_success(2, 2, 1) == doctest::Approx(0.5));
  SyntheticPolicy policy(registry(), {});
  CHECK(policy.success_probability("sorting", 0) == doctest::Approx(0.5));
  policy.set_skill("sorting", 2.0);
  CHECK(policy.success_probability("sorting", 4) == doctest::Approx(0.1192).epsilon(1e-3));
}

TEST_CASE("policy learns only from mixed observations") {
  SyntheticPolicy policy(registry(), {});
  std::vector<TrainingObservation> obs;
  for (int i = 0; i < 10; ++i) obs.push_back({"sorting", 0, true});
  for (int i = 0; i < 7; ++i) obs.push_back({"sorting", 0, false});
  policy.observe_training(obs);
  CHECK(policy.skill("sorting") == doctest::Approx(0.5));
  CHECK(policy.skill("knapsack") == 0.0);
}

TEST_CASE("policy config validation") {
  CHECK_THROWS_AS(SyntheticPolicy(registry(), {0, 0, 0.05, 0}), Error);
  CHECK_THROWS_AS(SyntheticPolicy(registry(), {0, 1, -1, 0}), Error);
  CHECK_THROWS_AS(SyntheticPolicy(registry(), {0, 1, 0.05, 1.0}), Error);
}

TEST_CASE("synthetic responses are deterministic and match respond") {
  SyntheticPolicy policy(registry(), {});
  auto inst = registry().at("sorting").generate(0, {1, "sorting", 0});
  const auto group = policy.respond_group(inst, 16);
  CHECK(group == policy.respond_group(inst, 16));
  for (std::size_t i = 0; i < group.size(); ++i) CHECK(group[i] == policy.respond(inst, inst.seed_path.child("rollout", i)));
  SyntheticPolicy broken(registry(), {0, 1, 0.05, 0.999});
  CHECK(broken.respond_group(inst, 4)[0] == SyntheticPolicy::kFormatErrorText);
}

TEST_CASE("coin-flip policy yields nearly all mixed groups") {
  auto state = state_for({"sorting", "multiplication"});
  CoinPolicy policy;
  auto b = small_batch();
  b.rollouts_per_problem = 16;
  const auto result = collect_training_batch(state, policy, registry(), b, SamplingMode::adaptive_mode());
  CHECK(result.kept.size() == 16);
  CHECK(result.metrics.effective_prompt_ratio > 0.95);
  CHECK_FALSE(result.attempt_cap_exceeded);
}

TEST_CASE("oracle policy exhausts the attempt cap") {
  auto state = state_for({"sorting"});
  OraclePolicy policy;
  const auto b = small_batch();
  const auto result = collect_training_batch(state, policy, registry(), b, SamplingMode::adaptive_mode());
  CHECK(result.kept.empty());
  CHECK(result.sampled.size() == b.attempt_cap_factor * b.oversample_size);
  CHECK(result.metrics.effective_prompt_ratio == 0.0);
  CHECK(result.attempt_cap_exceeded);
  CHECK(result.metrics.attempt_cap_hit);
  // Perfect answers at the frontier advance the window.
  CHECK(state.windows.at("sorting").high >= 1);
}

TEST_CASE("train_size zero samples nothing") {
  auto state = state_for({"sorting"});
  OraclePolicy policy;
  auto b = small_batch();
  b.train_size = 0;
  const auto result = collect_training_batch(state, policy, registry(), b, SamplingMode::adaptive_mode());
  CHECK(result.sampled.empty());
  CHECK(result.metrics.effective_prompt_ratio == 0.0);
  CHECK(state.step_counter == 1);
  b.train_size = 100;
  CHECK_THROWS_AS(collect_training_batch(state, policy, registry(), b, SamplingMode::adaptive_mode()), Error);
}

TEST_CASE("static mode leaves the scheduler alone and clamps to caps") {
  auto state = state_for({"bubbleswap_lowerbound_permutation_counting"});
  OraclePolicy policy;
  const auto result = collect_training_batch(state, policy, registry(), small_batch(), SamplingMode::static_mode(100));
  for (const auto& r : result.sampled) {
    CHECK(r.difficulty <= 6);
    CHECK_FALSE(r.counted);
  }
  CHECK(state.windows.at("bubbleswap_lowerbound_permutation_counting").high == 0);
}

TEST_CASE("sampled records match the scheduler's accounting") {
  auto state = state_for({"sorting", "knapsack"});
  SyntheticPolicy policy(registry(), {3.0, 1.0, 0.05, 0.0});
  for (int step = 0; step < 3; ++step) {
    const auto result = collect_training_batch(state, policy, registry(), small_batch(), SamplingMode::adaptive_mode());
    for (const auto& r : result.sampled) {
      CHECK(r.difficulty <= r.high_at_sampling);
      CHECK(r.counted == (r.difficulty == r.high_at_sampling));
    }
    std::uint64_t mixed = 0;
    for (const auto& r : result.sampled) mixed += r.mixed;
    CHECK(result.metrics.mixed_prompts == mixed);
    for (const auto& g : result.kept) CHECK(g.mixed);
  }
}

TEST_CASE("simulation is deterministic and config round-trips") {
  SimulationConfig c;
  c.envs = {"sorting", "inversion_pair"};
  c.steps = 4;
  c.batch = small_batch();
  c.master_seed = 9;
  const auto a = run_simulation(c, registry());
  const auto b = run_simulation(c, registry());
  REQUIRE(a.steps.size() == 4);
  for (std::size_t i = 0; i < a.steps.size(); ++i) CHECK(to_json(a.steps[i]) == to_json(b.steps[i]));
  CHECK(a.final_state == b.final_state);
  CHECK(a.final_skill == b.final_skill);
  const auto round = SimulationConfig::from_json(c.to_json());
  CHECK(round.to_json() == c.to_json());
  CHECK_THROWS_AS(SimulationConfig::from_json(Json{{"mode", "sideways"}}), Error);
  CHECK_THROWS_AS(SimulationConfig::from_json(Json{{"scheduler", {{"d_delta", 1}}}}), Error);
  c.envs.clear();
  CHECK_THROWS_AS(run_simulation(c, registry()), Error);
}

TEST_CASE("step metrics serialise every field") {
  StepMetrics m;
  m.step = 3;
  m.per_env_high["a"] = 2;
  m.frontier_accuracy["a"] = std::nullopt;
  const auto j = to_json(m);
  for (const auto* key : {"step", "sampled_prompts", "mixed_prompts", "kept_prompts", "effective_prompt_ratio",
                          "attempt_cap_hit", "per_env_high", "per_env_low", "frontier_accuracy",
                          "policy_skill_snapshot"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["frontier_accuracy"]["a"].is_null());
}

}  // TEST_SUITE
