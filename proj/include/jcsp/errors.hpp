#pragma once

#include <stdexcept>
#include <string>

namespace jcsp {

enum class ErrorKind {
  InvalidArgument,
  NotACongruence,
  NotASubuniverse,
  EmptySubuniverse,
  DomainMismatch,
  Cd3Violation,
  NotCd3,
  InvarianceViolation,
  NotAnIdeal,
  NotSubdirect,
  EmptyDomain,
  LemmaViolation,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so callers (the CLI in
/// particular) can map it to an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }
  /// The message without the kind prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorKind kind_;
  std::string detail_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace jcsp
