#pragma once

#include <stdexcept>
#include <string>

namespace supercal {

enum class ErrorCode {
  InvalidArgument,
  NonIterable,
  CapExceeded,
  UndefinedPoint,
  DegenerateConstant,
  NonpositiveFactor,
  QuadratureFailure,
  BracketFailure,
  StepTooLarge,
  PicardDivergence,
  SingularDiffusivity,
  GridMismatch,
  ProjectionStall,
  PreconditionViolation,
  ContainmentViolation,
  NotSolution,
  NotSupersolution,
  EmptyProbeList,
  NonEvaluable,
  InconsistentVerdicts,
  IoFailure,
  BadConfig,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) fail(code, what);
}

}  // namespace supercal
