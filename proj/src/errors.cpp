#include "jcsp/errors.hpp"

namespace jcsp {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::NotACongruence: return "NotACongruence";
    case ErrorKind::NotASubuniverse: return "NotASubuniverse";
    case ErrorKind::EmptySubuniverse: return "EmptySubuniverse";
    case ErrorKind::DomainMismatch: return "DomainMismatch";
    case ErrorKind::Cd3Violation: return "Cd3Violation";
    case ErrorKind::NotCd3: return "NotCd3";
    case ErrorKind::InvarianceViolation: return "InvarianceViolation";
    case ErrorKind::NotAnIdeal: return "NotAnIdeal";
    case ErrorKind::NotSubdirect: return "NotSubdirect";
    case ErrorKind::EmptyDomain: return "EmptyDomain";
    case ErrorKind::LemmaViolation: return "LemmaViolation";
    case ErrorKind::Parse: return "ParseError";
  }
  return "Error";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind), detail_(what) {}

void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace jcsp
