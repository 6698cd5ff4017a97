#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rlve/rng.hpp"
#include "rlve/types.hpp"

namespace rlve {

/// A verifiable environment: a difficulty-conditioned problem generator paired
/// with an algorithmic verifier. Generation is a pure function of
/// (difficulty, randomness coordinates); verification is a pure function of
/// (instance, output). Both are safe to call concurrently.
class Environment {
 public:
  explicit Environment(EnvironmentDescriptor descriptor) : descriptor_(std::move(descriptor)) {}
  virtual ~Environment() = default;

  Environment(const Environment&) = delete;
  Environment& operator=(const Environment&) = delete;

  const EnvironmentDescriptor& descriptor() const { return descriptor_; }
  const std::string& id() const { return descriptor_.env_id; }

  /// Throws Error(DifficultyOutOfRange) above max_supported_difficulty.
  ProblemInstance generate(DifficultyLevel d, const RandomnessCoordinates& coords) const;

  /// Never throws. Any internal failure is reported as a ParseFailure verdict.
  VerificationVerdict verify(const ProblemInstance& instance, std::string_view output) const noexcept;

  /// A deterministic plausible-but-wrong answer for this instance. Falls back
  /// to an unparseable string when no wrong variant can be constructed.
  std::string near_miss(const ProblemInstance& instance) const;

  /// The primary size proxy that grows with difficulty (array length, vertex
  /// count, polynomial degree, ...).
  virtual std::int64_t size_parameter(DifficultyLevel d) const = 0;

  /// Descriptor plus params schema and answer grammar.
  Json manifest() const;

 protected:
  virtual ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const = 0;
  virtual VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const = 0;
  /// One candidate near-miss; the caller rejects candidates that still verify.
  virtual std::optional<std::string> corrupt(const ProblemInstance& instance, Rng& rng) const = 0;
  virtual Json manifest_details() const = 0;

 private:
  EnvironmentDescriptor descriptor_;
};

using GeneratorFn = std::function<ProblemInstance(DifficultyLevel, Rng&)>;
using VerifierFn = std::function<VerificationVerdict(const ProblemInstance&, std::string_view)>;

/// Adapter for environments supplied as a bare generator/verifier pair.
class FunctionEnvironment final : public Environment {
 public:
  FunctionEnvironment(EnvironmentDescriptor descriptor, GeneratorFn generator, VerifierFn verifier)
      : Environment(std::move(descriptor)), generator_(std::move(generator)), verifier_(std::move(verifier)) {}

  std::int64_t size_parameter(DifficultyLevel d) const override { return d; }

 protected:
  ProblemInstance do_generate(DifficultyLevel d, Rng& rng) const override { return generator_(d, rng); }
  VerificationVerdict do_verify(const ProblemInstance& instance, std::string_view output) const override {
    return verifier_(instance, output);
  }
  std::optional<std::string> corrupt(const ProblemInstance&, Rng&) const override { return std::nullopt; }
  Json manifest_details() const override { return Json::object(); }

 private:
  GeneratorFn generator_;
  VerifierFn verifier_;
};

/// Immutable-after-construction collection of environments keyed by env_id.
class Registry {
 public:
  /// Throws Error(DuplicateEnvironmentId).
  const Environment& add(std::shared_ptr<const Environment> env);
  const Environment& register_environment(EnvironmentDescriptor descriptor, GeneratorFn generator,
                                          VerifierFn verifier);

  const Environment* find(std::string_view env_id) const;
  /// Throws Error(UnknownEnvironment).
  const Environment& at(std::string_view env_id) const;
  bool contains(std::string_view env_id) const { return find(env_id) != nullptr; }

  /// Descriptors sorted by env_id.
  std::vector<EnvironmentDescriptor> list() const;
  std::vector<std::string> ids() const;
  std::size_t size() const { return envs_.size(); }

  ProblemInstance generate_problem(std::string_view env_id, DifficultyLevel d,
                                   const RandomnessCoordinates& coords) const;
  /// Throws Error(UnknownEnvironment) when the instance names an unregistered
  /// environment; otherwise never throws.
  VerificationVerdict verify_output(const ProblemInstance& instance, std::string_view output) const;

 private:
  std::map<std::string, std::shared_ptr<const Environment>, std::less<>> envs_;
};

}  // namespace rlve
