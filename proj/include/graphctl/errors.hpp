#pragma once

#include <stdexcept>
#include <string>

namespace graphctl {

// Stable error identifiers. The CLI maps these to exit codes (validation -> 2,
// numerical -> 3) and to the machine-readable error JSON, so renaming one is a
// breaking change.
enum class ErrorCode {
  // validation / precondition problems
  NonPositiveLength,
  DisconnectedGraph,
  IllegalConditionPlacement,
  GridMismatch,
  UnsupportedKind,
  IndexOutOfRange,
  InsufficientSpectrum,
  DegenerateSpectrum,
  MultiplicityDetected,
  ZeroCoupling,
  UnequalLengths,
  MeshTooCoarse,
  OutsideBasin,
  BadInput,
  // numerical failures
  PoleProximity,
  RootIsolationFailure,
  EigensolverFailure,
  IllConditioned,
  ResidualTooLarge,
  StepTooLarge,
  NonFiniteState,
  Diverged,
  WaitTimeExceeded,
  TruncationInsufficient,
  FirstCouplingZero,
  NotInvariant,
};

const char* error_name(ErrorCode c);

// true for errors that indicate bad input rather than a numerical breakdown
bool is_validation_error(ErrorCode c);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& msg)
      : std::runtime_error(std::string(error_name(code)) + ": " + msg), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
  throw Error(code, msg);
}

}  // namespace graphctl
