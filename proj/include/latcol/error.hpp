#pragma once

#include <stdexcept>
#include <string>

namespace latcol {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad arguments: dimension out of range, malformed words, mismatched sizes.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Coset enumeration could not close the table within the coset limit.
class EnumerationOverflow : public Error {
 public:
  using Error::Error;
};

// A search exceeded its configured node budget. `stage` names the step that
// ran out so callers can report it.
class BudgetExceeded : public Error {
 public:
  BudgetExceeded(std::string stage, const std::string& what)
      : Error(what), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

// An internal consistency check failed. Always a bug or corrupted input.
class ConsistencyError : public Error {
 public:
  using Error::Error;
};

}  // namespace latcol
