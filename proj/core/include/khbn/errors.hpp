#pragma once

#include <stdexcept>
#include <string>

namespace khbn {

enum class ErrorKind {
  MalformedSyntax,
  ArcMultiplicity,
  NonPlanarOrInconsistentOrientation,
  EmptyWord,
  LetterOutOfRange,
  UnusedStrand,
  StateLengthMismatch,
  CrossingAlreadyOne,
  InvalidBasepoint,
  DimensionMismatch,
  NotNilpotentAtOrderK,
  BasepointMissing,
  SubcomplexViolation,
  DSquaredFailure,
  LiftFailure,
  ExactnessFailure,
  FiltrationViolation,
  UnclassifiedEdge,
  StateMismatch,
  ChainMapFailure,
  ModuleMismatch,
  ResourceLimit,
};

const char* to_string(ErrorKind kind) noexcept;

/// Every failure raised by the library carries one of the kinds above so that
/// callers (the CLI in particular) can map it to an exit status.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace khbn
