#pragma once

#include <stdexcept>
#include <string>

namespace lcqft {

enum class ErrorCode {
  NoIntertwiner,
  NoSolution,
  NotInSpinGroup,
  BadGenerator,
  LogBranchFailure,
  SingularMetric,
  FrameDegenerate,
  GridTooSmall,
  TruncationTooSmall,
  DimTooLarge,
  QuadratureNotConverged,
  CFLViolation,
  SlabTooThin,
  ZeroSection,
  EvaluationFailure,
  SingularMap,
  NotAchronal,
  GeometryError,
  UnknownSuite,
  ConfigParse,
  IoError,
  InvalidArgument,
};

const char* error_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace lcqft
