#pragma once

#include <stdexcept>
#include <string>

namespace lndkit {

enum class ErrorKind {
  DivisionByZero,
  FieldMismatch,
  UnsupportedField,
  NameCollision,
  NonMonic,
  NotIrreducible,
  SyntaxError,
  UnknownSymbol,
  UnknownVariable,
  PositiveCharacteristic,
  ResourceExceeded,
  NotAHomomorphism,
  NotWellDefined,
  DegBoundExceeded,
  ZeroElement,
  NotFound,
  InvalidPoint,
  OracleDisagreement,
  GenericNotInjective,
  ReductionFailed,
  InternalDisagreement,
  CertificateViolation,
  InvalidInput,
};

const char* to_string(ErrorKind kind);

// All library failures are reported through this type; `kind` lets callers
// (the CLI in particular) map failures onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(message) {}

  ErrorKind kind() const noexcept { return kind_; }
  // The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

// Errors that indicate a violated mathematical assumption rather than bad input.
bool is_assumption_violation(ErrorKind kind);

}  // namespace lndkit
