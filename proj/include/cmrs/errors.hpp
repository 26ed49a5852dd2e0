#pragma once

#include <stdexcept>
#include <string>

namespace cmrs {

// Base of every error raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed group-spec or certificate text.
struct ParseError : Error {
  using Error::Error;
};

// An operation was called outside its precondition.
struct PreconditionError : Error {
  using Error::Error;
};

// The requested object provably does not exist (e.g. a zero-sum partition
// into pairs).
struct InfeasibleError : Error {
  using Error::Error;
};

// The instance is outside the range covered by the implemented
// constructions; nothing is claimed about existence.
struct OutOfRangeError : Error {
  using Error::Error;
};

// A bounded search ran out of nodes before deciding.
struct SearchBudgetError : Error {
  using Error::Error;
};

// A construction produced an object that failed its verifier. Always a bug.
struct VerificationError : Error {
  using Error::Error;
};

}  // namespace cmrs
