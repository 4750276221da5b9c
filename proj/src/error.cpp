#include "sqgad/error.hpp"

namespace sqgad {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::PreconditionViolated: return "PreconditionViolated";
    case ErrorCode::SingularSymbol: return "SingularSymbol";
    case ErrorCode::EmptyBand: return "EmptyBand";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::QuadratureNoConvergence: return "QuadratureNoConvergence";
    case ErrorCode::ZeroField: return "ZeroField";
    case ErrorCode::DegenerateSystem: return "DegenerateSystem";
    case ErrorCode::HypothesisViolated: return "HypothesisViolated";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::NonPositiveValue: return "NonPositiveValue";
    case ErrorCode::Io: return "Io";
    case ErrorCode::Config: return "Config";
  }
  return "Unknown";
}

}  // namespace sqgad
