#include "rlve/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rlve/envs.hpp"
#include "rlve/error.hpp"
#include "rlve/harness.hpp"
#include "rlve/protocol.hpp"
#include "rlve/scheduler.hpp"

namespace rlve {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Json parse_json_text(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text, nullptr, true, true);
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidArgument, what + " is not valid JSON: " + e.what());
  }
}

// A problem file holds one instance record, either as the whole file or as
// its first non-empty line.
ProblemInstance read_problem(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return instance_from_json(Json::parse(text));
  } catch (const std::exception&) {
  }
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    return instance_from_json(parse_json_text(line, path));
  }
  throw Error(ErrorCode::InvalidArgument, path + " holds no problem record");
}

struct Options {
  // gen
  std::string env;
  DifficultyLevel difficulty = 0;
  std::uint64_t seed = 0;
  std::uint64_t count = 1;
  std::uint64_t counter = 0;
  bool no_reference = false;
  // verify
  std::string problem_file;
  std::string output_file;
  // simulate
  std::string config_file;
  std::string out_file;
  // serve
  std::string state_file;
  std::string listen = "stdio";
  std::vector<std::string> envs;
  bool include_reference = false;
  // export-testset
  std::size_t per_env = 50;
  DifficultyLevel low = 0;
  DifficultyLevel high = 4;
  // plot
  std::string metrics_file;
};

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + path);
  f << text;
}

int cmd_list(const Registry& registry, std::ostream& out) {
  for (const auto& d : registry.list()) out << to_json(d).dump() << '\n';
  return 0;
}

int cmd_manifest(const Registry& registry, std::ostream& out) {
  for (const auto& id : registry.ids()) out << registry.at(id).manifest().dump() << '\n';
  return 0;
}

int cmd_gen(const Registry& registry, const Options& o, std::ostream& out) {
  const auto& env = registry.at(o.env);
  for (std::uint64_t i = 0; i < o.count; ++i) {
    const auto instance = env.generate(o.difficulty, RandomnessCoordinates{o.seed, o.env, o.counter + i});
    out << to_json(instance, !o.no_reference).dump() << '\n';
  }
  return 0;
}

int cmd_verify(const Registry& registry, const Options& o, std::ostream& out) {
  const auto instance = read_problem(o.problem_file);
  if (!o.env.empty() && o.env != instance.env_id) {
    throw Error(ErrorCode::InvalidArgument, "problem belongs to " + instance.env_id + ", not " + o.env);
  }
  const std::string output = read_file(o.output_file);
  const auto verdict = registry.verify_output(instance, output);
  out << to_json(verdict).dump() << '\n';
  return 0;
}

int cmd_simulate(const Registry& registry, const Options& o, std::ostream& out) {
  const auto config = SimulationConfig::from_json(parse_json_text(read_file(o.config_file), o.config_file));
  const auto result = run_simulation(config, registry);
  std::ostringstream metrics;
  for (const auto& m : result.steps) metrics << to_json(m).dump() << '\n';
  if (o.out_file.empty()) throw Error(ErrorCode::InvalidArgument, "--out is required");
  write_output(o.out_file, metrics.str(), out);

  double ratio_sum = 0.0;
  for (const auto& m : result.steps) ratio_sum += m.effective_prompt_ratio;
  Json summary{{"config", config.to_json()},
               {"steps", result.steps.size()},
               {"mean_effective_prompt_ratio", result.steps.empty() ? 0.0 : ratio_sum / static_cast<double>(result.steps.size())},
               {"mean_final_skill", result.mean_final_skill()}};
  summary["final_skill"] = Json::object();
  for (const auto& [id, s] : result.final_skill) summary["final_skill"][id] = s;
  summary["final_high"] = Json::object();
  for (const auto& [id, h] : result.final_high) summary["final_high"][id] = h;
  if (o.out_file != "-") out << summary.dump() << '\n';
  return 0;
}

int cmd_serve(const Registry& registry, const Options& o, std::istream& in, std::ostream& out, std::ostream& err) {
  SchedulerState state;
  if (!o.state_file.empty() && std::filesystem::exists(o.state_file)) {
    state = read_checkpoint_file(o.state_file);
  } else {
    const auto ids = o.envs.empty() ? registry.ids() : o.envs;
    std::map<std::string, DifficultyLevel, std::less<>> ceilings;
    for (const auto& id : ids) ceilings[id] = registry.at(id).descriptor().max_supported_difficulty;
    state = init_state(ids, SchedulerConfig::defaults(), o.seed, ceilings);
    if (!o.state_file.empty()) write_checkpoint_file(o.state_file, state);
  }
  ServerOptions options;
  options.include_reference = o.include_reference;
  if (!o.state_file.empty()) options.checkpoint_path = o.state_file;
  ProtocolServer server(registry, std::move(state), options);
  if (o.listen == "stdio") {
    serve_stream(server, in, out);
    return 0;
  }
  const auto colon = o.listen.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::InvalidArgument, "--listen expects stdio or HOST:PORT");
  const std::string host = o.listen.substr(0, colon);
  const int port = std::stoi(o.listen.substr(colon + 1));
  if (port < 0 || port > 65535) throw Error(ErrorCode::InvalidArgument, "port out of range");
  err << "listening on " << o.listen << '\n';
  serve_tcp(server, host, static_cast<std::uint16_t>(port));
  return 0;
}

int cmd_export(const Registry& registry, const Options& o, std::ostream& out) {
  TestsetRequest request;
  request.env_ids = o.envs.empty() ? registry.ids() : o.envs;
  request.per_env = o.per_env;
  request.difficulty_low = o.low;
  request.difficulty_high = o.high;
  request.seed = o.seed;
  const auto problems = export_testset(registry, request);
  std::ostringstream text;
  write_testset(text, problems, !o.no_reference);
  write_output(o.out_file, text.str(), out);
  return 0;
}

int cmd_plot(const Options& o, std::ostream& out) {
  std::vector<Json> metrics;
  std::istringstream lines(read_file(o.metrics_file));
  std::string line;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    metrics.push_back(parse_json_text(line, o.metrics_file));
  }
  write_output(o.out_file, render_metrics_svg(metrics), out);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Adaptive verifiable environments: generate, verify, simulate, serve", "rlve"};
  app.require_subcommand(1);
  Options o;

  auto* list = app.add_subcommand("list", "Print environment descriptors");
  auto* manifest = app.add_subcommand("manifest", "Print per-environment params schema and answer grammar");

  auto* gen = app.add_subcommand("gen", "Generate problem instances");
  gen->add_option("--env", o.env, "Environment id")->required();
  gen->add_option("--difficulty", o.difficulty, "Difficulty level")->required();
  gen->add_option("--seed", o.seed, "Master seed");
  gen->add_option("-n,--count", o.count, "Number of instances");
  gen->add_option("--counter", o.counter, "First counter value");
  gen->add_flag("--no-reference", o.no_reference, "Omit reference answers");

  auto* verify = app.add_subcommand("verify", "Score a model output against a problem record");
  verify->add_option("--env", o.env, "Environment id (checked against the problem)");
  verify->add_option("--problem", o.problem_file, "Problem record file")->required();
  verify->add_option("--output", o.output_file, "Model output file")->required();

  auto* simulate = app.add_subcommand("simulate", "Run a curriculum simulation with a synthetic policy");
  simulate->add_option("--config", o.config_file, "Simulation config (JSON, comments allowed)")->required();
  simulate->add_option("--out", o.out_file, "Metrics output file (JSON lines)")->required();

  auto* serve = app.add_subcommand("serve", "Serve the problem/reward protocol");
  serve->add_option("--state", o.state_file, "Checkpoint file to restore from and keep updated");
  serve->add_option("--listen", o.listen, "stdio or HOST:PORT");
  serve->add_option("--envs", o.envs, "Environment ids for a fresh state")->delimiter(',');
  serve->add_option("--seed", o.seed, "Master seed for a fresh state");
  serve->add_flag("--include-reference", o.include_reference, "Hand out reference answers");

  auto* exporter = app.add_subcommand("export-testset", "Export a fixed held-out problem set");
  exporter->add_option("--envs", o.envs, "Environment ids (default: all)")->delimiter(',');
  exporter->add_option("--per-env", o.per_env, "Problems per environment");
  exporter->add_option("--low", o.low, "Lowest difficulty");
  exporter->add_option("--high", o.high, "Highest difficulty");
  exporter->add_option("--seed", o.seed, "Seed");
  exporter->add_option("--out", o.out_file, "Output file (default: standard output)");
  exporter->add_flag("--no-reference", o.no_reference, "Omit reference answers");

  auto* plot = app.add_subcommand("plot", "Render a metrics file as SVG");
  plot->add_option("--metrics", o.metrics_file, "Metrics file from simulate")->required();
  plot->add_option("--out", o.out_file, "SVG output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    const Registry registry = make_default_registry();
    if (list->parsed()) return cmd_list(registry, out);
    if (manifest->parsed()) return cmd_manifest(registry, out);
    if (gen->parsed()) return cmd_gen(registry, o, out);
    if (verify->parsed()) return cmd_verify(registry, o, out);
    if (simulate->parsed()) return cmd_simulate(registry, o, out);
    if (serve->parsed()) return cmd_serve(registry, o, std::cin, out, err);
    if (exporter->parsed()) return cmd_export(registry, o, out);
    if (plot->parsed()) return cmd_plot(o, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace rlve
