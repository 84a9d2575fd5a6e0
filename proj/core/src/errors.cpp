#include "qcrb/errors.hpp"

namespace qcrb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::NonSquare: return "NonSquare";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NotCommuting: return "NotCommuting";
    case ErrorCode::JointDiagonalizationFailed: return "JointDiagonalizationFailed";
    case ErrorCode::DomainViolation: return "DomainViolation";
    case ErrorCode::InvalidDensity: return "InvalidDensity";
    case ErrorCode::TraceNotOne: return "TraceNotOne";
    case ErrorCode::NotPositive: return "NotPositive";
    case ErrorCode::RankAmbiguous: return "RankAmbiguous";
    case ErrorCode::RankNotLocallyConstant: return "RankNotLocallyConstant";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::SLDInconsistent: return "SLDInconsistent";
    case ErrorCode::StructureViolation: return "StructureViolation";
    case ErrorCode::InvalidPOVM: return "InvalidPOVM";
    case ErrorCode::MissingW: return "MissingW";
    case ErrorCode::NonUnitaryWitness: return "NonUnitaryWitness";
    case ErrorCode::SingularOutcome: return "SingularOutcome";
    case ErrorCode::ModelMismatch: return "ModelMismatch";
    case ErrorCode::UnknownModel: return "UnknownModel";
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::NotCertified: return "NotCertified";
    case ErrorCode::MonteCarloDisabled: return "MonteCarloDisabled";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace qcrb
