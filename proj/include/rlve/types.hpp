#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rlve/rng.hpp"

namespace rlve {

// Field order in serialized records is part of the wire contract, so every
// record uses the insertion-ordered JSON flavour.
using Json = nlohmann::ordered_json;

using DifficultyLevel = std::uint32_t;

enum class VerdictCategory { ParseFailure, StructuralViolation, Graded, Exact };

std::string_view category_name(VerdictCategory c);
std::optional<VerdictCategory> parse_verdict_category(std::string_view name);

struct VerificationVerdict {
  double reward = -1.0;
  VerdictCategory category = VerdictCategory::ParseFailure;
  std::string detail;

  static VerificationVerdict parse_failure(std::string detail = {});
  static VerificationVerdict structural(double reward, std::string detail = {});
  /// Graded reward; collapses to Exact when reward is within 1e-9 of 1.
  static VerificationVerdict graded(double reward, std::string detail = {});
  static VerificationVerdict exact();

  bool is_correct() const { return reward >= 1.0 - 1e-9; }
};

enum class EnvCategory {
  ProgrammingCompetition,
  MathOperation,
  Optimization,
  ClassicalAlgorithm,
  LogicPuzzle,
  NpComplete,
};

enum class RewardStyle { Binary, Graded };

std::string_view env_category_name(EnvCategory c);
std::string_view reward_style_name(RewardStyle s);

struct EnvironmentDescriptor {
  std::string env_id;
  std::string display_name;
  EnvCategory category = EnvCategory::ClassicalAlgorithm;
  DifficultyLevel max_supported_difficulty = 0;
  bool has_planted_solution = false;
  RewardStyle reward_style = RewardStyle::Binary;
};

struct ProblemInstance {
  std::string env_id;
  DifficultyLevel difficulty = 0;
  Json params;
  std::string prompt;
  std::optional<std::string> reference_answer;
  RandomnessCoordinates seed_path;

  bool operator==(const ProblemInstance&) const = default;
};

Json to_json(const RandomnessCoordinates& coords);
RandomnessCoordinates coords_from_json(const Json& j);

Json to_json(const ProblemInstance& instance, bool include_reference = true);
/// Throws Error(InvalidArgument) when required fields are missing or mistyped.
ProblemInstance instance_from_json(const Json& j);

Json to_json(const VerificationVerdict& verdict);
Json to_json(const EnvironmentDescriptor& descriptor);

}  // namespace rlve
