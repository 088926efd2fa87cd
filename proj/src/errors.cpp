#include "mincad/errors.hpp"

namespace mincad {

const char* to_string(ErrorKind k) {
  switch (k) {
    case ErrorKind::ArityMismatch: return "ArityMismatch";
    case ErrorKind::DomainError: return "DomainError";
    case ErrorKind::IndeterminateSign: return "IndeterminateSign";
    case ErrorKind::UndecidableAtom: return "UndecidableAtom";
    case ErrorKind::ZeroPolynomial: return "ZeroPolynomial";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::InvalidCad: return "InvalidCad";
    case ErrorKind::NoRationalWitness: return "NoRationalWitness";
    case ErrorKind::AdaptednessViolation: return "AdaptednessViolation";
    case ErrorKind::BadLevel: return "BadLevel";
    case ErrorKind::SectionOutOfRange: return "SectionOutOfRange";
    case ErrorKind::NotReducible: return "NotReducible";
    case ErrorKind::NotLiftable: return "NotLiftable";
    case ErrorKind::PlanExhausted: return "PlanExhausted";
    case ErrorKind::LimitExceeded: return "LimitExceeded";
    case ErrorKind::IncompleteDag: return "IncompleteDag";
    case ErrorKind::IncomparableEndpoints: return "IncomparableEndpoints";
    case ErrorKind::NonPolynomialFiber: return "NonPolynomialFiber";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::UnknownEntry: return "UnknownEntry";
    case ErrorKind::BadParameter: return "BadParameter";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

void raise(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace mincad
