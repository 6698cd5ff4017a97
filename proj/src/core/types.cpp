#include "rlve/types.hpp"

#include <algorithm>
#include <cmath>

#include "rlve/error.hpp"

namespace rlve {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::DuplicateEnvironmentId: return "DuplicateEnvironmentId";
    case ErrorCode::UnknownEnvironment: return "UnknownEnvironment";
    case ErrorCode::DifficultyOutOfRange: return "DifficultyOutOfRange";
    case ErrorCode::GenerationExhausted: return "GenerationExhausted";
    case ErrorCode::EmptyEnvironmentSet: return "EmptyEnvironmentSet";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::DifficultyAboveWindow: return "DifficultyAboveWindow";
    case ErrorCode::MissingReference: return "MissingReference";
    case ErrorCode::MalformedCheckpoint: return "MalformedCheckpoint";
    case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::DeduplicationExhausted: return "DeduplicationExhausted";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

std::string_view category_name(VerdictCategory c) {
  switch (c) {
    case VerdictCategory::ParseFailure: return "ParseFailure";
    case VerdictCategory::StructuralViolation: return "StructuralViolation";
    case VerdictCategory::Graded: return "Graded";
    case VerdictCategory::Exact: return "Exact";
  }
  return "ParseFailure";
}

std::optional<VerdictCategory> parse_verdict_category(std::string_view name) {
  for (auto c : {VerdictCategory::ParseFailure, VerdictCategory::StructuralViolation, VerdictCategory::Graded,
                 VerdictCategory::Exact}) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

VerificationVerdict VerificationVerdict::parse_failure(std::string detail) {
  return {-1.0, VerdictCategory::ParseFailure, std::move(detail)};
}

VerificationVerdict VerificationVerdict::structural(double reward, std::string detail) {
  return {reward, VerdictCategory::StructuralViolation, std::move(detail)};
}

VerificationVerdict VerificationVerdict::graded(double reward, std::string detail) {
  if (std::isnan(reward)) reward = -1.0;
  reward = std::clamp(reward, -1.0, 1.0);
  if (std::abs(reward - 1.0) <= 1e-9) return exact();
  return {reward, VerdictCategory::Graded, std::move(detail)};
}

VerificationVerdict VerificationVerdict::exact() { return {1.0, VerdictCategory::Exact, {}}; }

std::string_view env_category_name(EnvCategory c) {
  switch (c) {
    case EnvCategory::ProgrammingCompetition: return "programming-competition";
    case EnvCategory::MathOperation: return "math-operation";
    case EnvCategory::Optimization: return "optimization";
    case EnvCategory::ClassicalAlgorithm: return "classical-algorithm";
    case EnvCategory::LogicPuzzle: return "logic-puzzle";
    case EnvCategory::NpComplete: return "np-complete";
  }
  return "classical-algorithm";
}

std::string_view reward_style_name(RewardStyle s) { return s == RewardStyle::Binary ? "binary" : "graded"; }

Json to_json(const RandomnessCoordinates& coords) {
  Json j;
  j["master_seed"] = coords.master_seed;
  j["env_id"] = coords.env_id;
  j["counter"] = coords.counter;
  return j;
}

namespace {

[[noreturn]] void bad_record(const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); }

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_record(std::string("missing field '") + key + "'");
  return j.at(key);
}

std::uint64_t require_u64(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
    bad_record(std::string("field '") + key + "' must be a non-negative integer");
  return v.get<std::uint64_t>();
}

std::string require_string(const Json& j, const char* key) {
  const Json& v = require(j, key);
  if (!v.is_string()) bad_record(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

}  // namespace

RandomnessCoordinates coords_from_json(const Json& j) {
  RandomnessCoordinates c;
  c.master_seed = require_u64(j, "master_seed");
  c.env_id = require_string(j, "env_id");
  c.counter = require_u64(j, "counter");
  return c;
}

Json to_json(const ProblemInstance& instance, bool include_reference) {
  Json j;
  j["env_id"] = instance.env_id;
  j["difficulty"] = instance.difficulty;
  j["params"] = instance.params;
  j["prompt"] = instance.prompt;
  if (include_reference && instance.reference_answer) j["reference_answer"] = *instance.reference_answer;
  j["seed_path"] = to_json(instance.seed_path);
  return j;
}

ProblemInstance instance_from_json(const Json& j) {
  ProblemInstance p;
  p.env_id = require_string(j, "env_id");
  const std::uint64_t d = require_u64(j, "difficulty");
  if (d > 0xFFFFFFFFULL) bad_record("difficulty out of range");
  p.difficulty = static_cast<DifficultyLevel>(d);
  p.params = require(j, "params");
  p.prompt = require_string(j, "prompt");
  if (j.contains("reference_answer") && !j.at("reference_answer").is_null()) {
    p.reference_answer = require_string(j, "reference_answer");
  }
  p.seed_path = coords_from_json(require(j, "seed_path"));
  return p;
}

Json to_json(const VerificationVerdict& verdict) {
  Json j;
  j["reward"] = verdict.reward;
  j["category"] = std::string(category_name(verdict.category));
  if (!verdict.detail.empty()) j["detail"] = verdict.detail;
  return j;
}

Json to_json(const EnvironmentDescriptor& d) {
  Json j;
  j["env_id"] = d.env_id;
  j["display_name"] = d.display_name;
  j["category"] = std::string(env_category_name(d.category));
  j["max_supported_difficulty"] = d.max_supported_difficulty;
  j["has_planted_solution"] = d.has_planted_solution;
  j["reward_style"] = std::string(reward_style_name(d.reward_style));
  return j;
}

}  // namespace rlve
