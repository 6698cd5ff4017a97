#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlve/environment.hpp"
#include "rlve/scheduler.hpp"
#include "rlve/types.hpp"

namespace rlve {

// ---------------------------------------------------------------- checkpoints

inline constexpr std::uint32_t kCheckpointVersion = 1;
inline constexpr std::string_view kCheckpointMagic = "RLVE-CHECKPOINT";
inline constexpr std::string_view kCheckpointExtension = ".rlveckpt";

/// Header line "RLVE-CHECKPOINT v1" followed by one canonical JSON line.
/// Identical states give identical bytes.
std::string save_checkpoint(const SchedulerState& state);

/// Throws MalformedCheckpoint or UnsupportedVersion.
SchedulerState restore_checkpoint(std::string_view bytes);

void write_checkpoint_file(const std::string& path, const SchedulerState& state);
SchedulerState read_checkpoint_file(const std::string& path);

// ---------------------------------------------------------------- test sets

struct TestsetRequest {
  std::vector<std::string> env_ids;
  std::size_t per_env = 50;
  DifficultyLevel difficulty_low = 0;
  DifficultyLevel difficulty_high = 4;
  std::uint64_t seed = 0;
  /// Generation attempts allowed per problem before giving up on finding a
  /// prompt not already in the set.
  std::size_t max_attempts_per_problem = 200;
};

/// Per environment, problem k gets difficulty low + (k mod (high - low + 1))
/// and is regenerated until its prompt is new within that environment.
/// Throws InvalidArgument, UnknownEnvironment, DifficultyOutOfRange or
/// DeduplicationExhausted.
std::vector<ProblemInstance> export_testset(const Registry& registry, const TestsetRequest& request);

/// One instance record per line.
void write_testset(std::ostream& out, const std::vector<ProblemInstance>& problems, bool include_reference = true);

// ---------------------------------------------------------------- server

struct ServerOptions {
  /// Hand out reference answers with problems (debugging only).
  bool include_reference = false;
  /// When set, the scheduler state is checkpointed here after each
  /// state-changing message.
  std::optional<std::string> checkpoint_path;
};

/// Newline-delimited JSON request/response protocol over a scheduler state.
/// Every call to handle_line yields exactly one response line. Thread safe:
/// messages are applied one at a time in arrival order.
class ProtocolServer {
 public:
  ProtocolServer(const Registry& registry, SchedulerState state, ServerOptions options = {});

  std::string handle_line(std::string_view line);
  Json handle(const Json& request);

  SchedulerState state() const;
  Json stats() const;

 private:
  struct Pending {
    std::string env_id;
    DifficultyLevel difficulty = 0;
  };

  Json get_problem(const Json& request);
  Json submit_results(const Json& request);
  Json stats_locked() const;
  Json export_problems(const Json& request);
  void persist();

  const Registry& registry_;
  SchedulerState state_;
  ServerOptions options_;
  std::map<std::string, Pending> pending_;
  std::uint64_t next_problem_id_ = 0;
  std::uint64_t submitted_ = 0;
  std::uint64_t submitted_mixed_ = 0;
  mutable std::mutex mutex_;
};

/// Reads requests line by line until end of input.
void serve_stream(ProtocolServer& server, std::istream& in, std::ostream& out);

/// Listens on host:port and serves each connection on its own thread. Runs
/// until the process is stopped. Throws InvalidArgument when the socket
/// cannot be set up.
void serve_tcp(ProtocolServer& server, const std::string& host, std::uint16_t port);

}  // namespace rlve
