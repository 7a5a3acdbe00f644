#include "catlab/error.hpp"

namespace catlab {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::AntipodalPair: return "AntipodalPair";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::NonPositiveFactor: return "NonPositiveFactor";
    case ErrorCode::PerimeterTooLarge: return "PerimeterTooLarge";
    case ErrorCode::InsufficientSpace: return "InsufficientSpace";
    case ErrorCode::UnboundedFactor: return "UnboundedFactor";
    case ErrorCode::OutOfDomain: return "OutOfDomain";
    case ErrorCode::OnlyLocalBound: return "OnlyLocalBound";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::BaseNotCAT0: return "BaseNotCAT0";
    case ErrorCode::RadiusTooLarge: return "RadiusTooLarge";
    case ErrorCode::NodeOnBoundary: return "NodeOnBoundary";
    case ErrorCode::NoFeasibleA: return "NoFeasibleA";
    case ErrorCode::ProximalDivergence: return "ProximalDivergence";
    case ErrorCode::IsolatedPoint: return "IsolatedPoint";
    case ErrorCode::BallTooLarge: return "BallTooLarge";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotConverged: return "NotConverged";
    case ErrorCode::DegenerateTriangleImage: return "DegenerateTriangleImage";
    case ErrorCode::CurveTooLong: return "CurveTooLong";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(ErrorCode code, const std::string& message) { throw Error(code, message); }

}  // namespace catlab
