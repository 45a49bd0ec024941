#pragma once

#include <stdexcept>
#include <string>

namespace subshift {

// Base for every failure raised by the library. The CLI maps InputError to
// exit code 2 and ContractViolation to exit code 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Caller supplied something outside an operation's precondition.
class InputError : public Error {
 public:
  using Error::Error;
};

// A construction annihilated the subshift (no bi-infinite path survives).
class EmptySubshiftError : public Error {
 public:
  using Error::Error;
};

// gap_constant could not certify a K within the requested bound.
class BoundExceededError : public Error {
 public:
  using Error::Error;
};

// No word of the requested length glues the given contexts.
class FillError : public Error {
 public:
  using Error::Error;
};

// A mathematical guarantee failed at runtime (e.g. the witness bound).
class ContractViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace subshift
