#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace catlab {

enum class ErrorCode {
  InvalidArgument,
  ParseError,
  // spaces
  AntipodalPair,
  Disconnected,
  NonPositiveFactor,
  // comparison
  PerimeterTooLarge,
  InsufficientSpace,
  // conformal
  UnboundedFactor,
  OutOfDomain,
  OnlyLocalBound,
  HypothesisViolated,
  BaseNotCAT0,
  RadiusTooLarge,
  NodeOnBoundary,
  NoFeasibleA,
  // flows
  ProximalDivergence,
  IsolatedPoint,
  // harmonic
  BallTooLarge,
  NoConvergence,
  NotConverged,
  DegenerateTriangleImage,
  CurveTooLong,
  // cli
  ConfigError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Exception carrying a machine-checkable error code. Every failure mode the
/// library reports goes through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& message);

}  // namespace catlab
