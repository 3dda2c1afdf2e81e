#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace squeeze {

enum class ErrorCode {
  NonPositive,
  PhiOutOfRange,
  UnknownPreset,
  NegativeOccupation,
  UnstableRegime,
  NonFiniteResult,
  NegativeTime,
  OutOfRegime,
  DegenerateBranch,
  SingularCovariance,
  FitFailed,
  StepTooLarge,
  InvalidArgument,
  Parse,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

// All failures in the library surface as this exception. `detail` carries
// the offending field or quantity when there is one (e.g. "t0").
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string detail);

  ErrorCode code() const noexcept { return code_; }
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace squeeze
