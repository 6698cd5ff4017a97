#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "rlve/cli.hpp"
#include "rlve/envs.hpp"

using namespace rlve;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("rlve_cli_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name, const std::string& text) const {
    const auto p = (path / name).string();
    std::ofstream(p, std::ios::binary) << text;
    return p;
  }
  std::string at(const std::string& name) const { return (path / name).string(); }
};

std::vector<Json> json_lines(const std::string& text) {
  std::vector<Json> v;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) v.push_back(Json::parse(line));
  return v;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("usage errors exit 1") {
  CHECK(run({}).code == 1);
  CHECK(run({"dance"}).code == 1);
  CHECK(run({"gen", "--env", "sorting"}).code == 1);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("runtime errors exit 2") {
  const auto r = run({"gen", "--env", "nope", "--difficulty", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error:") != std::string::npos);
  CHECK(run({"gen", "--env", "bubbleswap_lowerbound_permutation_counting", "--difficulty", "7"}).code == 2);
}

TEST_CASE("list and manifest cover every environment") {
  const auto list = run({"list"});
  CHECK(list.code == 0);
  CHECK(json_lines(list.out).size() == 16);
  const auto manifest = run({"manifest"});
  CHECK(manifest.code == 0);
  CHECK(json_lines(manifest.out).size() == 16);
}

TEST_CASE("gen sorting at difficulty 0") {
  const auto r = run({"gen", "--env", "sorting", "--difficulty", "0", "--seed", "7"});
  REQUIRE(r.code == 0);
  const auto lines = json_lines(r.out);
  REQUIRE(lines.size() == 1);
  CHECK(lines[0]["params"]["values"].size() == 3);
  CHECK(lines[0].contains("reference_answer"));
  CHECK(run({"gen", "--env", "sorting", "--difficulty", "0", "--seed", "7"}).out == r.out);
  const auto many = run({"gen", "--env", "sorting", "--difficulty", "2", "-n", "5", "--no-reference"});
  const auto five = json_lines(many.out);
  CHECK(five.size() == 5);
  CHECK_FALSE(five[0].contains("reference_answer"));
}

TEST_CASE("verify scores a parse failure as -1") {
  TempDir dir;
  const auto gen = run({"gen", "--env", "sorting", "--difficulty", "0", "--seed", "7"});
  const auto problem = dir.file("p.json", gen.out);
  const auto output = dir.file("o.txt", "I have no idea");
  const auto r = run({"verify", "--problem", problem, "--output", output});
  CHECK(r.code == 0);
  const auto v = Json::parse(r.out);
  CHECK(v["reward"] == -1.0);
  CHECK(v["category"] == "ParseFailure");
  CHECK(run({"verify", "--env", "knapsack", "--problem", problem, "--output", output}).code == 2);
  CHECK(run({"verify", "--problem", dir.at("missing"), "--output", output}).code == 2);
}

TEST_CASE("gen then verify the reference for every environment") {
  TempDir dir;
  for (const auto& id : make_default_registry().ids()) {
    CAPTURE(id);
    const auto gen = run({"gen", "--env", id, "--difficulty", "1", "--seed", "3"});
    REQUIRE(gen.code == 0);
    const auto record = Json::parse(gen.out);
    const auto problem = dir.file(id + ".json", gen.out);
    const auto output = dir.file(id + ".txt", "<answer>" + record["reference_answer"].get<std::string>() + "</answer>");
    const auto r = run({"verify", "--env", id, "--problem", problem, "--output", output});
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["reward"] == 1.0);
  }
}

TEST_CASE("export-testset writes a file") {
  TempDir dir;
  const auto out = dir.at("set.jsonl");
  const auto r = run({"export-testset", "--envs", "sorting,josephus", "--per-env", "10", "--low", "0", "--high", "1",
                      "--seed", "2", "--out", out});
  REQUIRE(r.code == 0);
  std::ifstream in(out);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(json_lines(buf.str()).size() == 20);
  CHECK(run({"export-testset", "--envs", "sorting", "--low", "2", "--high", "1"}).code == 2);
}

TEST_CASE("simulate and plot") {
  TempDir dir;
  const auto config = dir.file("sim.json", R"({
    // tiny run
    "envs": ["sorting"],
    "steps": 2,
    "batch": {"train_size": 4, "oversample_size": 8, "rollouts_per_problem": 4, "attempt_cap_factor": 2}
  })");
  const auto metrics = dir.at("m.jsonl");
  const auto r = run({"simulate", "--config", config, "--out", metrics});
  REQUIRE(r.code == 0);
  const auto summary = Json::parse(r.out);
  CHECK(summary["steps"] == 2);
  std::ifstream in(metrics);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(json_lines(buf.str()).size() == 2);

  const auto svg = run({"plot", "--metrics", metrics});
  CHECK(svg.code == 0);
  CHECK(svg.out.find("<svg") != std::string::npos);
  CHECK(run({"simulate", "--config", dir.file("bad.json", "{"), "--out", metrics}).code == 2);
}

TEST_CASE("serve over stdio with a state file") {
  // cmd_serve reads std::cin; only the fresh-state bootstrap is checked here.
  TempDir dir;
  const auto state = dir.at("s.rlveckpt");
  const auto r = run({"serve", "--listen", "bogus", "--state", state, "--envs", "sorting"});
  CHECK(r.code == 2);
  CHECK(fs::exists(state));
}

}  // TEST_SUITE
