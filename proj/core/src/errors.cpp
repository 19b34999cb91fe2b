#include "khbn/errors.hpp"

namespace khbn {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MalformedSyntax: return "MalformedSyntax";
    case ErrorKind::ArcMultiplicity: return "ArcMultiplicityError";
    case ErrorKind::NonPlanarOrInconsistentOrientation: return "NonPlanarOrInconsistentOrientation";
    case ErrorKind::EmptyWord: return "EmptyWord";
    case ErrorKind::LetterOutOfRange: return "LetterOutOfRange";
    case ErrorKind::UnusedStrand: return "UnusedStrand";
    case ErrorKind::StateLengthMismatch: return "StateLengthMismatch";
    case ErrorKind::CrossingAlreadyOne: return "CrossingAlreadyOne";
    case ErrorKind::InvalidBasepoint: return "InvalidBasepoint";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::NotNilpotentAtOrderK: return "NotNilpotentAtOrderK";
    case ErrorKind::BasepointMissing: return "BasepointMissing";
    case ErrorKind::SubcomplexViolation: return "SubcomplexViolation";
    case ErrorKind::DSquaredFailure: return "DSquaredFailure";
    case ErrorKind::LiftFailure: return "LiftFailure";
    case ErrorKind::ExactnessFailure: return "ExactnessFailure";
    case ErrorKind::FiltrationViolation: return "FiltrationViolation";
    case ErrorKind::UnclassifiedEdge: return "UnclassifiedEdge";
    case ErrorKind::StateMismatch: return "StateMismatch";
    case ErrorKind::ChainMapFailure: return "ChainMapFailure";
    case ErrorKind::ModuleMismatch: return "ModuleMismatch";
    case ErrorKind::ResourceLimit: return "ResourceLimit";
  }
  return "Unknown";
}

}  // namespace khbn
