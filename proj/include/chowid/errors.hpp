#pragma once

#include <stdexcept>
#include <string>

namespace chowid {

// Raised when a caller breaks a documented precondition (mismatched moduli,
// wrong dimensions, out-of-range indices).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Raised on division by zero in Z/mZ.
class FieldError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace chowid
