#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include "rlve/envs.hpp"
#include "rlve/error.hpp"
#include "rlve/harness.hpp"
#include "rlve/protocol.hpp"

using namespace rlve;

namespace {

const Registry& registry() {
  static const Registry r = make_default_registry();
  return r;
}

SchedulerState fresh(std::vector<std::string> ids = {"sorting", "multiplication"}, std::uint64_t seed = 4) {
  std::map<std::string, DifficultyLevel, std::less<>> ceilings;
  for (const auto& id : ids) ceilings[id] = registry().at(id).descriptor().max_supported_difficulty;
  return init_state(ids, SchedulerConfig::defaults(), seed, ceilings);
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_SUITE("protocol") {

TEST_CASE("checkpoint round trip is exact") {
  auto s = fresh();
  s.windows["sorting"] = DifficultyWindow{3, 6, 40, 48, 60};
  s.counter = 12345;
  s.step_counter = 17;
  const auto bytes = save_checkpoint(s);
  CHECK(bytes.rfind("RLVE-CHECKPOINT v1\n", 0) == 0);
  const auto back = restore_checkpoint(bytes);
  CHECK(back == s);
  CHECK(save_checkpoint(back) == bytes);
}

TEST_CASE("checkpoint errors") {
  const auto bytes = save_checkpoint(fresh());
  CHECK(code_of([&] { restore_checkpoint(bytes.substr(0, bytes.size() / 2)); }) == ErrorCode::MalformedCheckpoint);
  CHECK(code_of([&] { restore_checkpoint(""); }) == ErrorCode::MalformedCheckpoint);
  CHECK(code_of([&] { restore_checkpoint("hello\n{}"); }) == ErrorCode::MalformedCheckpoint);
  std::string v2 = bytes;
  v2.replace(v2.find("v1"), 2, "v2");
  CHECK(code_of([&] { restore_checkpoint(v2); }) == ErrorCode::UnsupportedVersion);
  // Window with low above high is rejected.
  std::string bad = bytes;
  const auto pos = bad.find("\"low\":0");
  REQUIRE(pos != std::string::npos);
  bad.replace(pos, 7, "\"low\":9");
  CHECK(code_of([&] { restore_checkpoint(bad); }) == ErrorCode::MalformedCheckpoint);
}

TEST_CASE("checkpoint files") {
  const auto path = (std::filesystem::temp_directory_path() / "rlve_test.rlveckpt").string();
  auto s = fresh();
  s.counter = 99;
  write_checkpoint_file(path, s);
  CHECK(read_checkpoint_file(path) == s);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(read_checkpoint_file(path), Error);
}

TEST_CASE("test set export") {
  TestsetRequest r;
  r.env_ids = {"sorting", "knapsack"};
  r.per_env = 20;
  r.difficulty_high = 4;
  r.seed = 5;
  const auto a = export_testset(registry(), r);
  CHECK(a.size() == 40);
  std::map<std::string, std::map<DifficultyLevel, int>> counts;
  std::set<std::string> prompts;
  for (const auto& p : a) {
    counts[p.env_id][p.difficulty]++;
    prompts.insert(p.env_id + p.prompt);
  }
  CHECK(prompts.size() == 40);
  for (const auto& [env, levels] : counts) {
    CHECK(levels.size() == 5);
    for (const auto& [d, n] : levels) CHECK(n == 4);
  }
  const auto b = export_testset(registry(), r);
  std::ostringstream sa, sb;
  write_testset(sa, a);
  write_testset(sb, b);
  CHECK(sa.str() == sb.str());
  r.seed = 6;
  std::ostringstream sc;
  write_testset(sc, export_testset(registry(), r));
  CHECK(sc.str() != sa.str());
}

TEST_CASE("test set export errors") {
  TestsetRequest r;
  r.env_ids = {"bubbleswap_lowerbound_permutation_counting"};
  r.per_env = 10;
  r.difficulty_low = 0;
  r.difficulty_high = 0;
  CHECK(code_of([&] { export_testset(registry(), r); }) == ErrorCode::DeduplicationExhausted);
  r.difficulty_high = 7;
  CHECK(code_of([&] { export_testset(registry(), r); }) == ErrorCode::DifficultyOutOfRange);
  r.env_ids = {"nope"};
  r.difficulty_high = 1;
  CHECK(code_of([&] { export_testset(registry(), r); }) == ErrorCode::UnknownEnvironment);
  r.env_ids = {"sorting"};
  r.difficulty_low = 3;
  CHECK(code_of([&] { export_testset(registry(), r); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("server walkthrough") {
  ProtocolServer server(registry(), fresh({"sorting"}));
  auto got = Json::parse(server.handle_line(R"({"kind":"get_problem","count":1,"request_id":7})"));
  CHECK(got["status"] == "ok");
  CHECK(got["request_id"] == 7);
  REQUIRE(got["problems"].size() == 1);
  const auto& p = got["problems"][0];
  CHECK(p["problem_id"] == "p0");
  CHECK(p["env_id"] == "sorting");
  CHECK(p["difficulty"] == 0);
  CHECK_FALSE(p.contains("reference_answer"));
  Json submit{{"kind", "submit_results"}, {"problem_id", "p0"}, {"rewards", std::vector<double>(16, 1.0)}};
  auto res = server.handle(submit);
  CHECK(res["status"] == "ok");
  CHECK(res["counted"] == true);
  const auto stats = server.stats();
  CHECK(stats["envs"][0]["attempted"] == 16);
  CHECK(stats["envs"][0]["correct"] == 16);
  CHECK(stats["submitted"] == 1);
  CHECK(stats["mixed"] == 0);
  CHECK(stats["outstanding"] == 0);
  // The same id cannot be submitted twice.
  res = server.handle(submit);
  CHECK(res["status"] == "error");
  CHECK(res["error"] == "unknown_problem_id");
}

TEST_CASE("server errors") {
  ProtocolServer server(registry(), fresh());
  auto err = [&](const std::string& line) { return Json::parse(server.handle_line(line))["error"].get<std::string>(); };
  CHECK(err("not json") == "malformed_request");
  CHECK(err("[]") == "malformed_request");
  CHECK(err(R"({"kind":"dance"})") == "malformed_request");
  CHECK(err(R"({"kind":"get_problem","count":-1})") == "malformed_request");
  CHECK(err(R"({"kind":"submit_results","problem_id":"p999","rewards":[1]})") == "unknown_problem_id");
  CHECK(err(R"({"kind":"submit_results","problem_id":"p0","rewards":[2]})") == "malformed_request");
  CHECK(err(R"({"kind":"export_testset","envs":["zzz"],"per_env":1,"difficulty_low":0,"difficulty_high":0,"seed":1})") ==
        "unknown_env");
}

TEST_CASE("server export and stats") {
  ProtocolServer server(registry(), fresh(), ServerOptions{true, std::nullopt});
  auto res = server.handle(Json{{"kind", "export_testset"},
                                {"envs", {"sorting"}},
                                {"per_env", 5},
                                {"difficulty_low", 0},
                                {"difficulty_high", 4},
                                {"seed", 1}});
  CHECK(res["status"] == "ok");
  CHECK(res["count"] == 5);
  auto got = server.handle(Json{{"kind", "get_problem"}, {"count", 3}});
  CHECK(got["problems"][0].contains("reference_answer"));
  CHECK(server.stats()["outstanding"] == 3);
  CHECK(server.stats()["counter"] == 3);
}

TEST_CASE("server persists checkpoints") {
  const auto path = (std::filesystem::temp_directory_path() / "rlve_server.rlveckpt").string();
  {
    ProtocolServer server(registry(), fresh(), ServerOptions{false, path});
    server.handle(Json{{"kind", "get_problem"}, {"count", 2}});
    CHECK(read_checkpoint_file(path) == server.state());
  }
  std::filesystem::remove(path);
}

TEST_CASE("server fuzz: every line gets exactly one JSON response") {
  ProtocolServer server(registry(), fresh({"sorting", "josephus"}));
  Rng rng(5);
  const std::vector<std::string> kinds{"get_problem", "submit_results", "get_stats", "export_testset", "bogus"};
  for (int i = 0; i < 10000; ++i) {
    std::string line;
    switch (rng.uniform_int(0, 3)) {
      case 0: {
        line.resize(static_cast<std::size_t>(rng.uniform_int(0, 60)));
        for (auto& c : line) c = static_cast<char>(rng.uniform_int(1, 255));
        break;
      }
      case 1: {
        Json j{{"kind", kinds[static_cast<std::size_t>(rng.uniform_int(0, 4))]}};
        if (rng.bernoulli(0.5)) j["count"] = rng.uniform_int(-2, 3);
        if (rng.bernoulli(0.5)) j["problem_id"] = "p" + std::to_string(rng.uniform_int(0, 50));
        if (rng.bernoulli(0.5)) j["rewards"] = std::vector<double>(static_cast<std::size_t>(rng.uniform_int(0, 20)), rng.bernoulli(0.5) ? 1.0 : 0.0);
        if (rng.bernoulli(0.1)) j["rewards"] = "lots";
        line = j.dump();
        break;
      }
      case 2: line = R"({"kind":"get_problem","count":)" + std::to_string(rng.uniform_int(0, 2)) + "}"; break;
      default: line = "{\"kind\":"; break;
    }
    std::string reply;
    CHECK_NOTHROW(reply = server.handle_line(line));
    CHECK(reply.find('\n') == std::string::npos);
    const auto j = Json::parse(reply, nullptr, false);
    REQUIRE_FALSE(j.is_discarded());
    CHECK((j["status"] == "ok" || j["status"] == "error"));
  }
}

TEST_CASE("serve_stream answers line by line") {
  ProtocolServer server(registry(), fresh());
  std::istringstream in("{\"kind\":\"get_stats\"}\n\n{\"kind\":\"get_problem\"}\n");
  std::ostringstream out;
  serve_stream(server, in, out);
  std::istringstream lines(out.str());
  std::string line;
  int count = 0;
  while (std::getline(lines, line)) {
    CHECK(Json::parse(line)["status"] == "ok");
    ++count;
  }
  CHECK(count == 2);
}

TEST_CASE("server matches the in-process loop") {
  const std::vector<std::string> ids{"sorting", "inversion_pair"};
  ProtocolServer server(registry(), fresh(ids, 11));
  SchedulerState local = fresh(ids, 11);
  SyntheticPolicy policy(registry(), {2.0, 1.0, 0.05, 0.0});
  for (int i = 0; i < 400; ++i) {
    const auto got = server.handle(Json{{"kind", "get_problem"}, {"count", 1}});
    const auto& record = got["problems"][0];
    // Local mirror of the same draw.
    const auto coords = next_coordinates(local);
    const auto task = sample_task(local, coords);
    const auto inst = registry().at(task.env_id).generate(task.difficulty, {local.master_seed, task.env_id, coords.counter});
    CHECK(record["env_id"] == task.env_id);
    CHECK(record["difficulty"] == task.difficulty);
    CHECK(record["prompt"] == inst.prompt);
    std::vector<double> rewards;
    for (const auto& out : policy.respond_group(inst, 16)) rewards.push_back(registry().verify_output(inst, out).reward);
    record_outcomes(local, task.env_id, task.difficulty, rewards);
    server.handle(Json{{"kind", "submit_results"}, {"problem_id", record["problem_id"]}, {"rewards", rewards}});
  }
  CHECK(server.state() == local);
  CHECK(local.windows.at("sorting").high > 0);
}

}  // TEST_SUITE
