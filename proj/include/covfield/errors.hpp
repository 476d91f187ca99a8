#pragma once

#include <stdexcept>
#include <string>

namespace covfield {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed arguments: shape mismatches, bad JSON, out-of-range parameters.
struct InvalidInput : Error {
  using Error::Error;
};

/// A density operator that violates one of the state invariants.
struct InvalidState : Error {
  using Error::Error;
};

/// Argument outside the mathematical domain of the operation.
struct DomainError : Error {
  using Error::Error;
};

struct Unsupported : Error {
  using Error::Error;
};

/// An internal cross-check failed; indicates a broken upstream certificate.
struct InternalConsistency : Error {
  using Error::Error;
};

}  // namespace covfield
