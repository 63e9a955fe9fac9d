#pragma once

#include <stdexcept>
#include <string>

namespace bcsim {

enum class ErrorCode {
  None = 0,
  SchedulingInPast,
  UnknownDestination,
  InsufficientCoverage,
  TooFewPairs,
  InfeasibleLoad,
  NoFeasibleNode,
  SensingStarved,
  NegativeDelta,
  ParseFailure,
  ValidationFailure,
  IoFailure,
  InvalidArgument,
};

const char* error_code_name(ErrorCode code);

// Simulation errors carry a machine-checkable code; scenario-level handlers
// turn the expected ones (InsufficientCoverage, NoFeasibleNode, ...) into
// session outcomes instead of aborting the run.
class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace bcsim
