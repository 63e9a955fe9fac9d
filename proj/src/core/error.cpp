#include "core/error.hpp"

namespace bcsim {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::None: return "None";
    case ErrorCode::SchedulingInPast: return "SchedulingInPast";
    case ErrorCode::UnknownDestination: return "UnknownDestination";
    case ErrorCode::InsufficientCoverage: return "InsufficientCoverage";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::InfeasibleLoad: return "InfeasibleLoad";
    case ErrorCode::NoFeasibleNode: return "NoFeasibleNode";
    case ErrorCode::SensingStarved: return "SensingStarved";
    case ErrorCode::NegativeDelta: return "NegativeDelta";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::ValidationFailure: return "ValidationFailure";
    case ErrorCode::IoFailure: return "IoFailure";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace bcsim
