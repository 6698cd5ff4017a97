#include <doctest.h>

#include <set>

#include "rlve/answer.hpp"
#include "rlve/environment.hpp"
#include "rlve/envs.hpp"
#include "rlve/error.hpp"
#include "rlve/rng.hpp"
#include "rlve/types.hpp"

using namespace rlve;

TEST_SUITE("core") {

TEST_CASE("randomness is a pure function of the coordinates") {
  RandomnessCoordinates a{7, "sorting", 3};
  Rng r1(a), r2(a);
  for (int i = 0; i < 100; ++i) CHECK(r1.next_u64() == r2.next_u64());
  Rng r3(RandomnessCoordinates{7, "sorting", 4});
  Rng r4(RandomnessCoordinates{7, "sortinh", 3});
  Rng r5(RandomnessCoordinates{8, "sorting", 3});
  const auto base = Rng(a).next_u64();
  CHECK(r3.next_u64() != base);
  CHECK(r4.next_u64() != base);
  CHECK(r5.next_u64() != base);
  CHECK(a.child("rollout", 1) == a.child("rollout", 1));
  CHECK_FALSE(a.child("rollout", 1) == a.child("rollout", 2));
}

TEST_CASE("uniform_int stays in range and hits every value") {
  Rng rng(123);
  std::set<std::int64_t> seen;
  for (int i = 0; i < 5000; ++i) {
    const auto v = rng.uniform_int(-3, 5);
    CHECK(v >= -3);
    CHECK(v <= 5);
    seen.insert(v);
  }
  CHECK(seen.size() == 9);
  CHECK(rng.uniform_int(4, 4) == 4);
  for (int i = 0; i < 1000; ++i) {
    const double u = rng.uniform01();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("extract_answer precedence") {
  CHECK(extract_answer("<think>hmm</think>\n<answer>42</answer>") == "42");
  CHECK(extract_answer("reasoning...\n1 2 3") == "1 2 3");
  CHECK_FALSE(extract_answer("").has_value());
  CHECK_FALSE(extract_answer("   \n\n  ").has_value());
  CHECK(extract_answer("<answer>1</answer> text <answer> 2 </answer>") == "2");
  CHECK(extract_answer("<think>a\nb</think>\nfinal\n`7`") == "7");
  CHECK(extract_answer("x\n\"5\"\n\n") == "5");
  CHECK(extract_answer("a\nb\nc", 2) == "b\nc");
}

TEST_CASE("integer parsing helpers") {
  CHECK(parse_int64("+12") == 12);
  CHECK(parse_int64("-4") == -4);
  CHECK_FALSE(parse_int64("4a").has_value());
  CHECK(parse_int_list("[1, 2,3]") == std::vector<std::int64_t>{1, 2, 3});
  CHECK_FALSE(parse_int_list("[]").has_value());
  CHECK_FALSE(parse_int_list("1 two 3").has_value());
  CHECK(parse_real("1.5e2") == doctest::Approx(150.0));
  CHECK_FALSE(parse_real("inf").has_value());
  CHECK_FALSE(parse_real("nan").has_value());
}

TEST_CASE("verdict factories pin category and reward") {
  CHECK(VerificationVerdict::parse_failure().reward == -1.0);
  CHECK(VerificationVerdict::exact().reward == 1.0);
  CHECK(VerificationVerdict::graded(1.0 - 1e-12).category == VerdictCategory::Exact);
  CHECK(VerificationVerdict::graded(2.0).reward == 1.0);
  CHECK(VerificationVerdict::graded(-3.0).reward == -1.0);
  CHECK(VerificationVerdict::graded(0.25).category == VerdictCategory::Graded);
}

TEST_CASE("registry registration, listing and errors") {
  Registry empty;
  CHECK(empty.list().empty());

  Registry r;
  auto gen = [](DifficultyLevel, Rng&) {
    ProblemInstance p;
    p.prompt = "p";
    p.reference_answer = "1";
    return p;
  };
  auto ver = [](const ProblemInstance&, std::string_view out) {
    return out == "1" ? VerificationVerdict::exact() : VerificationVerdict::parse_failure();
  };
  r.register_environment({"zeta", "Z", EnvCategory::LogicPuzzle, 3, true, RewardStyle::Binary}, gen, ver);
  r.register_environment({"alpha", "A", EnvCategory::LogicPuzzle, 3, true, RewardStyle::Binary}, gen, ver);
  const auto listed = r.list();
  REQUIRE(listed.size() == 2);
  CHECK(listed[0].env_id == "alpha");
  CHECK(listed[1].env_id == "zeta");
  CHECK_THROWS_AS(r.register_environment({"alpha", "A", EnvCategory::LogicPuzzle, 3, true, RewardStyle::Binary}, gen, ver),
                  Error);
  try {
    r.at("nope");
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownEnvironment);
  }
  try {
    r.generate_problem("alpha", 4, {});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DifficultyOutOfRange);
  }
  ProblemInstance orphan;
  orphan.env_id = "missing";
  CHECK_THROWS_AS(r.verify_output(orphan, "1"), Error);
}

TEST_CASE("sorting example from the operation contract") {
  const Registry reg = make_default_registry();
  ProblemInstance p = reg.generate_problem("sorting", 0, {1, "sorting", 0});
  p.params = Json{{"values", {3, 1, 2}}};
  CHECK(reg.verify_output(p, "1 2 3").reward == 1.0);
  CHECK(reg.verify_output(p, "1 2 3").category == VerdictCategory::Exact);
  CHECK(reg.verify_output(p, "").reward == -1.0);
  CHECK(reg.verify_output(p, "").category == VerdictCategory::ParseFailure);
}

TEST_CASE("instance records round-trip with a fixed field order") {
  const Registry reg = make_default_registry();
  const auto p = reg.generate_problem("knapsack", 3, {9, "knapsack", 2});
  const Json j = to_json(p);
  std::vector<std::string> keys;
  for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"env_id", "difficulty", "params", "prompt", "reference_answer", "seed_path"});
  CHECK(instance_from_json(j) == p);
  CHECK(instance_from_json(Json::parse(j.dump())) == p);
  CHECK_FALSE(to_json(p, false).contains("reference_answer"));
  CHECK_THROWS_AS(instance_from_json(Json{{"env_id", 3}}), Error);
}

}  // TEST_SUITE
