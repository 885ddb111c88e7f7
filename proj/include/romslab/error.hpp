#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace romslab {

enum class ErrorCode {
  NonPositiveSigmaT,
  NegativeData,
  LambdaAtLeastOne,
  LengthMismatch,
  GridMismatch,
  InvalidGrid,
  WrongHalf,
  InvalidBoundary,
  OddN,
  DeltaOutOfRange,
  AlphaUnbounded,
  InvalidRule,
  ZeroMu,
  PureAbsorber,
  NoConvergence,
  ReferenceNotConverged,
  TooFewPoints,
  InvalidArgument,
  Config,
};

std::string_view to_string(ErrorCode code);

/// Exception carrying a machine-checkable code next to the message.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace romslab
