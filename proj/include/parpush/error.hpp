#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace parpush {

enum class ErrorCode {
  DivisionByZero,
  OutOfRange,
  ParseError,
  MissingSection,
  MalformedBundle,
  InvalidCovering,
  NonIntegralGenus,
  UnknownPoint,
  FlagOverUnmarkedPoint,
  MisalignedResidues,
  MergeConflict,
  NoConsistentAssignment,
  AmbiguousAssignment,
  RankMismatch,
  NotTorusPreserving,
  PrecisionLoss,
};

std::string_view error_name(ErrorCode code) noexcept;

/// Every failure raised by the library. The code names the failure class;
/// the message carries the details.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace parpush
