#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cmath>
#include <cstring>
#include <istream>
#include <ostream>
#include <thread>

#include "rlve/error.hpp"
#include "rlve/harness.hpp"
#include "rlve/protocol.hpp"

namespace rlve {

namespace {

struct RequestError {
  std::string code;
  std::string message;
};

Json error_response(const std::optional<std::string>& kind, const RequestError& e) {
  Json j{{"status", "error"}};
  j["kind"] = kind ? Json(*kind) : Json(nullptr);
  j["error"] = e.code;
  j["message"] = e.message;
  return j;
}

Json ok_response(const std::string& kind) { return Json{{"status", "ok"}, {"kind", kind}}; }

[[noreturn]] void malformed(const std::string& message) { throw RequestError{"malformed_request", message}; }

template <class T>
T get_field(const Json& request, const char* key) {
  if (!request.contains(key)) malformed(std::string("missing field '") + key + "'");
  try {
    return request.at(key).get<T>();
  } catch (const std::exception&) {
    malformed(std::string("field '") + key + "' has the wrong type");
  }
}

template <class T>
T get_field(const Json& request, const char* key, T fallback) {
  if (!request.contains(key)) return fallback;
  return get_field<T>(request, key);
}

}  // namespace

ProtocolServer::ProtocolServer(const Registry& registry, SchedulerState state, ServerOptions options)
    : registry_(registry), state_(std::move(state)), options_(std::move(options)) {
  for (const auto& [id, w] : state_.windows) registry_.at(id);
}

std::string ProtocolServer::handle_line(std::string_view line) {
  Json request;
  try {
    request = Json::parse(line);
  } catch (const std::exception&) {
    return error_response(std::nullopt, {"malformed_request", "request is not valid JSON"}).dump();
  }
  return handle(request).dump();
}

Json ProtocolServer::handle(const Json& request) {
  std::optional<std::string> kind;
  std::optional<Json> request_id;
  Json response;
  try {
    if (!request.is_object()) malformed("request must be an object");
    if (request.contains("request_id")) request_id = request.at("request_id");
    kind = get_field<std::string>(request, "kind");
    std::lock_guard lock(mutex_);
    if (*kind == "get_problem") {
      response = get_problem(request);
    } else if (*kind == "submit_results") {
      response = submit_results(request);
    } else if (*kind == "get_stats") {
      response = stats_locked();
    } else if (*kind == "export_testset") {
      response = export_problems(request);
    } else {
      malformed("unknown kind '" + *kind + "'");
    }
  } catch (const RequestError& e) {
    response = error_response(kind, e);
  } catch (const Error& e) {
    const std::string code = e.code() == ErrorCode::UnknownEnvironment ? "unknown_env" : "malformed_request";
    response = error_response(kind, {code, e.what()});
  } catch (const std::exception& e) {
    response = error_response(kind, {"malformed_request", e.what()});
  }
  if (request_id) response["request_id"] = *request_id;
  return response;
}

Json ProtocolServer::get_problem(const Json& request) {
  const auto count = get_field<std::int64_t>(request, "count", 1);
  if (count < 0 || count > 10000) malformed("count must lie in [0, 10000]");
  Json problems = Json::array();
  for (std::int64_t i = 0; i < count; ++i) {
    const RandomnessCoordinates coords = next_coordinates(state_);
    const Task task = sample_task(state_, coords);
    const ProblemInstance instance =
        registry_.at(task.env_id).generate(task.difficulty, {state_.master_seed, task.env_id, coords.counter});
    const std::string id = "p" + std::to_string(next_problem_id_++);
    pending_[id] = Pending{task.env_id, task.difficulty};
    Json record{{"problem_id", id}};
    const Json body = to_json(instance, options_.include_reference);
    for (auto it = body.begin(); it != body.end(); ++it) record[it.key()] = it.value();
    problems.push_back(std::move(record));
  }
  persist();
  Json response = ok_response("get_problem");
  response["problems"] = std::move(problems);
  return response;
}

Json ProtocolServer::submit_results(const Json& request) {
  const auto id = get_field<std::string>(request, "problem_id");
  if (!request.contains("rewards") || !request.at("rewards").is_array()) malformed("rewards must be an array");
  std::vector<double> rewards;
  for (const auto& r : request.at("rewards")) {
    if (!r.is_number()) malformed("rewards must be numbers");
    const double v = r.get<double>();
    if (!std::isfinite(v) || v < -1.0 || v > 1.0) malformed("rewards must lie in [-1, 1]");
    rewards.push_back(v);
  }
  auto it = pending_.find(id);
  if (it == pending_.end()) throw RequestError{"unknown_problem_id", "no outstanding problem '" + id + "'"};
  const Pending p = it->second;
  pending_.erase(it);

  const RecordResult rec = record_outcomes(state_, p.env_id, p.difficulty, rewards);
  ++submitted_;
  if (rewards_mixed(rewards)) ++submitted_mixed_;
  persist();
  Json response = ok_response("submit_results");
  response["problem_id"] = id;
  response["counted"] = rec.counted;
  response["advanced"] = rec.advanced;
  return response;
}

Json ProtocolServer::stats_locked() const {
  Json response = ok_response("get_stats");
  Json envs = Json::array();
  for (const auto& [id, w] : state_.windows) {
    envs.push_back(Json{{"env_id", id}, {"low", w.low}, {"high", w.high}, {"correct", w.correct}, {"attempted", w.attempted}});
  }
  response["envs"] = std::move(envs);
  response["submitted"] = submitted_;
  response["mixed"] = submitted_mixed_;
  response["effective_prompt_ratio"] =
      submitted_ == 0 ? 0.0 : static_cast<double>(submitted_mixed_) / static_cast<double>(submitted_);
  response["outstanding"] = pending_.size();
  response["counter"] = state_.counter;
  return response;
}

Json ProtocolServer::export_problems(const Json& request) {
  TestsetRequest t;
  t.env_ids = get_field<std::vector<std::string>>(request, "envs");
  const auto per_env = get_field<std::int64_t>(request, "per_env");
  const auto low = get_field<std::int64_t>(request, "difficulty_low");
  const auto high = get_field<std::int64_t>(request, "difficulty_high");
  if (per_env < 1 || low < 0 || high < low) malformed("need per_env >= 1 and 0 <= difficulty_low <= difficulty_high");
  t.per_env = static_cast<std::size_t>(per_env);
  t.difficulty_low = static_cast<DifficultyLevel>(low);
  t.difficulty_high = static_cast<DifficultyLevel>(high);
  t.seed = get_field<std::uint64_t>(request, "seed");
  for (const auto& id : t.env_ids) {
    if (!registry_.contains(id)) throw RequestError{"unknown_env", "unknown environment '" + id + "'"};
  }
  const auto problems = export_testset(registry_, t);
  Json response = ok_response("export_testset");
  response["count"] = problems.size();
  Json list = Json::array();
  for (const auto& p : problems) list.push_back(to_json(p, true));
  response["problems"] = std::move(list);
  return response;
}

void ProtocolServer::persist() {
  if (options_.checkpoint_path) write_checkpoint_file(*options_.checkpoint_path, state_);
}

SchedulerState ProtocolServer::state() const {
  std::lock_guard lock(mutex_);
  return state_;
}

Json ProtocolServer::stats() const {
  std::lock_guard lock(mutex_);
  return stats_locked();
}

void serve_stream(ProtocolServer& server, std::istream& in, std::ostream& out) {
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    out << server.handle_line(line) << '\n';
    out.flush();
  }
}

namespace {

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

void serve_connection(ProtocolServer& server, int fd) {
  std::string buffer;
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::recv(fd, chunk, sizeof(chunk), 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    while ((pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      if (!send_all(fd, server.handle_line(line) + "\n")) {
        ::close(fd);
        return;
      }
    }
  }
  ::close(fd);
}

}  // namespace

void serve_tcp(ProtocolServer& server, const std::string& host, std::uint16_t port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  hints.ai_flags = AI_PASSIVE;
  addrinfo* result = nullptr;
  const std::string port_text = std::to_string(port);
  if (::getaddrinfo(host.empty() ? nullptr : host.c_str(), port_text.c_str(), &hints, &result) != 0 || !result) {
    throw Error(ErrorCode::InvalidArgument, "cannot resolve " + host);
  }
  int listener = -1;
  for (addrinfo* ai = result; ai; ai = ai->ai_next) {
    listener = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (listener < 0) continue;
    const int yes = 1;
    ::setsockopt(listener, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
    if (::bind(listener, ai->ai_addr, ai->ai_addrlen) == 0 && ::listen(listener, 16) == 0) break;
    ::close(listener);
    listener = -1;
  }
  ::freeaddrinfo(result);
  if (listener < 0) throw Error(ErrorCode::InvalidArgument, "cannot listen on " + host + ":" + port_text);
  for (;;) {
    const int fd = ::accept(listener, nullptr, nullptr);
    if (fd < 0) continue;
    std::thread(serve_connection, std::ref(server), fd).detach();
  }
}

}  // namespace rlve
