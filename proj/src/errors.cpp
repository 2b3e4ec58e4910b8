#include "graphctl/errors.hpp"

namespace graphctl {

const char* error_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveLength: return "NonPositiveLength";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::IllegalConditionPlacement: return "IllegalConditionPlacement";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::UnsupportedKind: return "UnsupportedKind";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::InsufficientSpectrum: return "InsufficientSpectrum";
    case ErrorCode::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorCode::MultiplicityDetected: return "MultiplicityDetected";
    case ErrorCode::ZeroCoupling: return "ZeroCoupling";
    case ErrorCode::UnequalLengths: return "UnequalLengths";
    case ErrorCode::MeshTooCoarse: return "MeshTooCoarse";
    case ErrorCode::OutsideBasin: return "OutsideBasin";
    case ErrorCode::BadInput: return "BadInput";
    case ErrorCode::PoleProximity: return "PoleProximity";
    case ErrorCode::RootIsolationFailure: return "RootIsolationFailure";
    case ErrorCode::EigensolverFailure: return "EigensolverFailure";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ResidualTooLarge: return "ResidualTooLarge";
    case ErrorCode::StepTooLarge: return "StepTooLarge";
    case ErrorCode::NonFiniteState: return "NonFiniteState";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::WaitTimeExceeded: return "WaitTimeExceeded";
    case ErrorCode::TruncationInsufficient: return "TruncationInsufficient";
    case ErrorCode::FirstCouplingZero: return "FirstCouplingZero";
    case ErrorCode::NotInvariant: return "NotInvariant";
  }
  return "UnknownError";
}

bool is_validation_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::NonPositiveLength:
    case ErrorCode::DisconnectedGraph:
    case ErrorCode::IllegalConditionPlacement:
    case ErrorCode::GridMismatch:
    case ErrorCode::UnsupportedKind:
    case ErrorCode::IndexOutOfRange:
    case ErrorCode::InsufficientSpectrum:
    case ErrorCode::DegenerateSpectrum:
    case ErrorCode::MultiplicityDetected:
    case ErrorCode::ZeroCoupling:
    case ErrorCode::UnequalLengths:
    case ErrorCode::MeshTooCoarse:
    case ErrorCode::OutsideBasin:
    case ErrorCode::BadInput:
      return true;
    default:
      return false;
  }
}

}  // namespace graphctl
