#include "romslab/error.hpp"

namespace romslab {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonPositiveSigmaT: return "NonPositiveSigmaT";
    case ErrorCode::NegativeData: return "NegativeData";
    case ErrorCode::LambdaAtLeastOne: return "LambdaAtLeastOne";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::WrongHalf: return "WrongHalf";
    case ErrorCode::InvalidBoundary: return "InvalidBoundary";
    case ErrorCode::OddN: return "OddN";
    case ErrorCode::DeltaOutOfRange: return "DeltaOutOfRange";
    case ErrorCode::AlphaUnbounded: return "AlphaUnbounded";
    case ErrorCode::InvalidRule: return "InvalidRule";
    case ErrorCode::ZeroMu: return "ZeroMu";
    case ErrorCode::PureAbsorber: return "PureAbsorber";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::ReferenceNotConverged: return "ReferenceNotConverged";
    case ErrorCode::TooFewPoints: return "TooFewPoints";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Config: return "ConfigError";
  }
  return "Unknown";
}

}  // namespace romslab
