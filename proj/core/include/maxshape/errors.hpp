#pragma once

#include <stdexcept>
#include <string>

namespace maxshape {

enum class ErrorCode {
  NonInvertible,
  SupportViolation,
  DegenerateNormal,
  DegenerateTriangle,
  EvaluationOutOfDomain,
  OutsideTubularNeighborhood,
  EmptySampleSet,
  QuadratureFailure,
  UnsupportedOuterBoundary,
  PolarizationNotTransverse,
  SingularExtension,
  NotContracting,
  MaxItersExceeded,
  SingularSystem,
  LiftFailure,
  NotConverged,
  SingularLinearizedSystem,
  MissingCurvature,
  ConfigError,
  IoError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace maxshape
