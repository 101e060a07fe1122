#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ttp {

enum class ErrorKind {
  InvalidArgument,
  DimensionMismatch,
  DegenerateSample,
  SampleTooSmall,
  IndexOutOfRange,
  NonVStatEstimator,
  ParseError,
  ConfigError,
};

std::string_view to_string(ErrorKind kind);

/// Single exception type for the library; `kind()` lets the CLI map failures
/// onto its exit-code contract without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix that what() carries.
  const std::string& message() const noexcept { return message_; }

 private:
  ErrorKind kind_;
  std::string message_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& message);

}  // namespace ttp
