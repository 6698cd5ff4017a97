#include <ostream>
#include <unordered_set>

#include "rlve/error.hpp"
#include "rlve/protocol.hpp"

namespace rlve {

std::vector<ProblemInstance> export_testset(const Registry& registry, const TestsetRequest& request) {
  if (request.difficulty_low > request.difficulty_high) {
    throw Error(ErrorCode::InvalidArgument, "difficulty_low exceeds difficulty_high");
  }
  if (request.per_env == 0) throw Error(ErrorCode::InvalidArgument, "per_env must be at least 1");
  if (request.max_attempts_per_problem == 0) throw Error(ErrorCode::InvalidArgument, "no attempts allowed");
  for (const auto& id : request.env_ids) {
    const auto& env = registry.at(id);
    if (request.difficulty_high > env.descriptor().max_supported_difficulty) {
      throw Error(ErrorCode::DifficultyOutOfRange, id + ": difficulty " + std::to_string(request.difficulty_high) +
                                                       " exceeds maximum " +
                                                       std::to_string(env.descriptor().max_supported_difficulty));
    }
  }

  const std::uint64_t levels = static_cast<std::uint64_t>(request.difficulty_high - request.difficulty_low) + 1;
  std::vector<ProblemInstance> out;
  out.reserve(request.env_ids.size() * request.per_env);
  for (const auto& id : request.env_ids) {
    const auto& env = registry.at(id);
    std::unordered_set<std::string> prompts;
    std::uint64_t counter = 0;
    for (std::size_t k = 0; k < request.per_env; ++k) {
      const auto d = static_cast<DifficultyLevel>(request.difficulty_low + k % levels);
      bool placed = false;
      for (std::size_t attempt = 0; attempt < request.max_attempts_per_problem && !placed; ++attempt) {
        ProblemInstance p = env.generate(d, RandomnessCoordinates{request.seed, id, counter++});
        if (prompts.insert(p.prompt).second) {
          out.push_back(std::move(p));
          placed = true;
        }
      }
      if (!placed) {
        throw Error(ErrorCode::DeduplicationExhausted,
                    id + ": no new prompt at difficulty " + std::to_string(d) + " after " +
                        std::to_string(request.max_attempts_per_problem) + " attempts (problem " +
                        std::to_string(k) + " of " + std::to_string(request.per_env) + ")");
      }
    }
  }
  return out;
}

void write_testset(std::ostream& out, const std::vector<ProblemInstance>& problems, bool include_reference) {
  for (const auto& p : problems) out << to_json(p, include_reference).dump() << '\n';
}

}  // namespace rlve
