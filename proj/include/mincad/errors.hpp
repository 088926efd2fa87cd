#pragma once

#include <stdexcept>
#include <string>

namespace mincad {

enum class ErrorKind {
  ArityMismatch,
  DomainError,
  IndeterminateSign,
  UndecidableAtom,
  ZeroPolynomial,
  ParseError,
  InvalidCad,
  NoRationalWitness,
  AdaptednessViolation,
  BadLevel,
  SectionOutOfRange,
  NotReducible,
  NotLiftable,
  PlanExhausted,
  LimitExceeded,
  IncompleteDag,
  IncomparableEndpoints,
  NonPolynomialFiber,
  TooLarge,
  UnknownEntry,
  BadParameter,
};

const char* to_string(ErrorKind k);

// Every library failure is an Error tagged with a kind; the message carries
// the offending subterm, index or point.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void raise(ErrorKind kind, const std::string& what);

}  // namespace mincad
