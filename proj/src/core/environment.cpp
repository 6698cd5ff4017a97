#include "rlve/environment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "rlve/error.hpp"

namespace rlve {

namespace {

constexpr int kNearMissAttempts = 16;
constexpr std::string_view kUnparseable = "I could not determine the answer.";

// Pin the category/reward relationship regardless of what an environment's
// verifier returned.
VerificationVerdict normalize(VerificationVerdict v) {
  if (std::isnan(v.reward)) return VerificationVerdict::parse_failure("verifier produced NaN");
  v.reward = std::clamp(v.reward, -1.0, 1.0);
  switch (v.category) {
    case VerdictCategory::ParseFailure: v.reward = -1.0; break;
    case VerdictCategory::Exact: v.reward = 1.0; break;
    case VerdictCategory::StructuralViolation:
      if (v.reward != -0.5 && v.reward != 0.0) v.reward = v.reward < -0.25 ? -0.5 : 0.0;
      break;
    case VerdictCategory::Graded:
      if (v.reward >= 1.0 - 1e-9) v = VerificationVerdict::exact();
      break;
  }
  return v;
}

}  // namespace

ProblemInstance Environment::generate(DifficultyLevel d, const RandomnessCoordinates& coords) const {
  if (d > descriptor_.max_supported_difficulty) {
    throw Error(ErrorCode::DifficultyOutOfRange, id() + ": difficulty " + std::to_string(d) + " exceeds maximum " +
                                                     std::to_string(descriptor_.max_supported_difficulty));
  }
  Rng rng(coords);
  ProblemInstance p = do_generate(d, rng);
  p.env_id = id();
  p.difficulty = d;
  p.seed_path = coords;
  return p;
}

VerificationVerdict Environment::verify(const ProblemInstance& instance, std::string_view output) const noexcept {
  try {
    return normalize(do_verify(instance, output));
  } catch (const std::exception& e) {
    try {
      return VerificationVerdict::parse_failure(std::string("verifier rejected output: ") + e.what());
    } catch (...) {
    }
  } catch (...) {
  }
  return VerificationVerdict{-1.0, VerdictCategory::ParseFailure, {}};
}

std::string Environment::near_miss(const ProblemInstance& instance) const {
  for (int attempt = 0; attempt < kNearMissAttempts; ++attempt) {
    Rng rng(instance.seed_path.child("near_miss", static_cast<std::uint64_t>(attempt)));
    std::optional<std::string> candidate;
    try {
      candidate = corrupt(instance, rng);
    } catch (const std::exception&) {
      candidate.reset();
    }
    if (!candidate) break;
    if (!verify(instance, *candidate).is_correct()) return *candidate;
  }
  return std::string(kUnparseable);
}

Json Environment::manifest() const {
  Json j = to_json(descriptor_);
  Json details = manifest_details();
  for (auto it = details.begin(); it != details.end(); ++it) j[it.key()] = it.value();
  return j;
}

const Environment& Registry::add(std::shared_ptr<const Environment> env) {
  if (!env) throw Error(ErrorCode::InvalidArgument, "null environment");
  const std::string id = env->id();
  if (envs_.contains(id)) throw Error(ErrorCode::DuplicateEnvironmentId, id);
  auto [it, inserted] = envs_.emplace(id, std::move(env));
  return *it->second;
}

const Environment& Registry::register_environment(EnvironmentDescriptor descriptor, GeneratorFn generator,
                                                  VerifierFn verifier) {
  return add(std::make_shared<FunctionEnvironment>(std::move(descriptor), std::move(generator), std::move(verifier)));
}

const Environment* Registry::find(std::string_view env_id) const {
  auto it = envs_.find(env_id);
  return it == envs_.end() ? nullptr : it->second.get();
}

const Environment& Registry::at(std::string_view env_id) const {
  const Environment* env = find(env_id);
  if (!env) throw Error(ErrorCode::UnknownEnvironment, std::string(env_id));
  return *env;
}

std::vector<EnvironmentDescriptor> Registry::list() const {
  std::vector<EnvironmentDescriptor> out;
  out.reserve(envs_.size());
  for (const auto& [id, env] : envs_) out.push_back(env->descriptor());
  return out;
}

std::vector<std::string> Registry::ids() const {
  std::vector<std::string> out;
  out.reserve(envs_.size());
  for (const auto& [id, env] : envs_) out.push_back(id);
  return out;
}

ProblemInstance Registry::generate_problem(std::string_view env_id, DifficultyLevel d,
                                           const RandomnessCoordinates& coords) const {
  return at(env_id).generate(d, coords);
}

VerificationVerdict Registry::verify_output(const ProblemInstance& instance, std::string_view output) const {
  return at(instance.env_id).verify(instance, output);
}

}  // namespace rlve
