#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qcrb {

enum class ErrorCode {
  NonSquare,
  ShapeMismatch,
  NotHermitian,
  NotCommuting,
  JointDiagonalizationFailed,
  DomainViolation,
  InvalidDensity,
  TraceNotOne,
  NotPositive,
  RankAmbiguous,
  RankNotLocallyConstant,
  SchemaViolation,
  SLDInconsistent,
  StructureViolation,
  InvalidPOVM,
  MissingW,
  NonUnitaryWitness,
  SingularOutcome,
  ModelMismatch,
  UnknownModel,
  InvalidParameter,
  NotCertified,
  MonteCarloDisabled,
  IoError,
};

std::string_view to_string(ErrorCode code);

// Every module error carries a machine-readable code; the CLI serializes both.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace qcrb
