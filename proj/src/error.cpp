#include "lndkit/error.hpp"

namespace lndkit {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::FieldMismatch: return "FieldMismatch";
    case ErrorKind::UnsupportedField: return "UnsupportedField";
    case ErrorKind::NameCollision: return "NameCollision";
    case ErrorKind::NonMonic: return "NonMonic";
    case ErrorKind::NotIrreducible: return "NotIrreducible";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UnknownSymbol: return "UnknownSymbol";
    case ErrorKind::UnknownVariable: return "UnknownVariable";
    case ErrorKind::PositiveCharacteristic: return "PositiveCharacteristic";
    case ErrorKind::ResourceExceeded: return "ResourceExceeded";
    case ErrorKind::NotAHomomorphism: return "NotAHomomorphism";
    case ErrorKind::NotWellDefined: return "NotWellDefined";
    case ErrorKind::DegBoundExceeded: return "DegBoundExceeded";
    case ErrorKind::ZeroElement: return "ZeroElement";
    case ErrorKind::NotFound: return "NotFound";
    case ErrorKind::InvalidPoint: return "InvalidPoint";
    case ErrorKind::OracleDisagreement: return "OracleDisagreement";
    case ErrorKind::GenericNotInjective: return "GenericNotInjective";
    case ErrorKind::ReductionFailed: return "ReductionFailed";
    case ErrorKind::InternalDisagreement: return "InternalDisagreement";
    case ErrorKind::CertificateViolation: return "CertificateViolation";
    case ErrorKind::InvalidInput: return "InvalidInput";
  }
  return "Unknown";
}

bool is_assumption_violation(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::OracleDisagreement:
    case ErrorKind::InternalDisagreement:
    case ErrorKind::CertificateViolation:
    case ErrorKind::GenericNotInjective:
    case ErrorKind::DegBoundExceeded:
      return true;
    default:
      return false;
  }
}

}  // namespace lndkit
