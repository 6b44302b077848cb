#pragma once

#include <stdexcept>
#include <string>

namespace munj {

enum class ErrorKind {
  Type,                 // ill-sorted term or formula
  NonMonotonic,         // fixed-point operator with a negative occurrence
  StrayPredicateVar,    // predicate variable not bound by an operator
  Malformed,            // structural invariant of a kernel value violated
  Rule,                 // rewrite rule rejected by validation
  Fuel,                 // step budget exhausted
  DemandAnnotation,     // unification outside the constructor fragment
  Check,                // proof does not check against its goal
  StuckEqualityRedex,   // refl major premise but no branch factors
  Admission,            // recursive definition rejected
  Syntax,               // surface-language parse error
  Io,
};

const char* to_string(ErrorKind kind);

// All kernel failures are reported through this exception type.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& message) {
  throw Error(kind, message);
}

}  // namespace munj
