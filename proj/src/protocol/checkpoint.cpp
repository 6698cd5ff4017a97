#include <filesystem>
#include <fstream>
#include <sstream>

#include "rlve/error.hpp"
#include "rlve/protocol.hpp"

namespace rlve {

namespace {

[[noreturn]] void malformed(const std::string& why) { throw Error(ErrorCode::MalformedCheckpoint, why); }

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) malformed(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const std::exception&) {
    malformed(std::string("field '") + key + "' has the wrong type");
  }
}

}  // namespace

std::string save_checkpoint(const SchedulerState& state) {
  Json envs = Json::array();
  for (const auto& [id, w] : state.windows) {  // std::map keeps env ids sorted
    Json e{{"env_id", id}};
    const Json wj = to_json(w);
    for (auto it = wj.begin(); it != wj.end(); ++it) e[it.key()] = it.value();
    envs.push_back(std::move(e));
  }
  Json body{{"version", kCheckpointVersion},
            {"config", to_json(state.config)},
            {"master_seed", state.master_seed},
            {"counter", state.counter},
            {"step_counter", state.step_counter},
            {"envs", std::move(envs)}};
  return std::string(kCheckpointMagic) + " v" + std::to_string(kCheckpointVersion) + "\n" + body.dump() + "\n";
}

SchedulerState restore_checkpoint(std::string_view bytes) {
  const auto newline = bytes.find('\n');
  if (newline == std::string_view::npos) malformed("no header line");
  const std::string_view header = bytes.substr(0, newline);
  const std::string prefix = std::string(kCheckpointMagic) + " v";
  if (header.substr(0, prefix.size()) != prefix) malformed("bad magic");
  const std::string_view version_text = header.substr(prefix.size());
  std::uint32_t header_version = 0;
  if (version_text.empty()) malformed("missing version");
  for (char c : version_text) {
    if (c < '0' || c > '9' || header_version > 100000) malformed("bad version");
    header_version = header_version * 10 + static_cast<std::uint32_t>(c - '0');
  }
  if (header_version != kCheckpointVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "checkpoint version " + std::to_string(header_version));
  }

  Json body;
  try {
    body = Json::parse(bytes.substr(newline + 1));
  } catch (const std::exception&) {
    malformed("body is not valid JSON");
  }
  const auto version = field<std::uint32_t>(body, "version");
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::UnsupportedVersion, "checkpoint version " + std::to_string(version));
  }

  SchedulerState state;
  const Json config = field<Json>(body, "config");
  state.config.tau_acc = field<double>(config, "tau_acc");
  state.config.tau_num = field<std::uint64_t>(config, "tau_num");
  state.config.d_delta = field<std::uint32_t>(config, "d_delta");
  state.config.rollouts_per_problem = field<std::uint32_t>(config, "rollouts_per_problem");
  auto timing = parse_check_timing(field<std::string>(config, "check_timing"));
  if (!timing) malformed("unknown check_timing");
  state.config.check_timing = *timing;
  try {
    state.config.validate();
  } catch (const Error& e) {
    malformed(e.what());
  }
  state.master_seed = field<std::uint64_t>(body, "master_seed");
  state.counter = field<std::uint64_t>(body, "counter");
  state.step_counter = field<std::uint64_t>(body, "step_counter");

  const Json envs = field<Json>(body, "envs");
  if (!envs.is_array() || envs.empty()) malformed("envs must be a non-empty array");
  for (const auto& e : envs) {
    DifficultyWindow w;
    const auto id = field<std::string>(e, "env_id");
    w.low = field<DifficultyLevel>(e, "low");
    w.high = field<DifficultyLevel>(e, "high");
    w.correct = field<std::uint64_t>(e, "correct");
    w.attempted = field<std::uint64_t>(e, "attempted");
    if (!e.contains("ceiling")) malformed("missing field 'ceiling'");
    if (!e.at("ceiling").is_null()) w.ceiling = field<DifficultyLevel>(e, "ceiling");
    if (w.low > w.high || w.high - w.low + 1 > state.config.d_delta || w.correct > w.attempted) {
      malformed("window invariants violated for " + id);
    }
    if (!state.windows.emplace(id, w).second) malformed("duplicate env " + id);
  }
  return state;
}

void write_checkpoint_file(const std::string& path, const SchedulerState& state) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp);
    out << save_checkpoint(state);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

SchedulerState read_checkpoint_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return restore_checkpoint(buf.str());
}

}  // namespace rlve
