#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rlve {

enum class ErrorCode {
  DuplicateEnvironmentId,
  UnknownEnvironment,
  DifficultyOutOfRange,
  GenerationExhausted,
  EmptyEnvironmentSet,
  InvalidConfig,
  DifficultyAboveWindow,
  MissingReference,
  MalformedCheckpoint,
  UnsupportedVersion,
  DeduplicationExhausted,
  InvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

// Every recoverable failure in the library is reported through this type so
// callers can switch on the code instead of parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rlve
