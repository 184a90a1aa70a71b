#pragma once

#include <stdexcept>
#include <string>

namespace cabne {

/// Root of every error this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad schema, out-of-range values, broken invariants.
class InvalidInput : public Error {
 public:
  using Error::Error;
};

/// A configured size budget (search nodes, coalitions, grid points, support) was exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// A payment rule's closed form has no valid solution for this outcome.
class InfeasibleForm : public Error {
 public:
  using Error::Error;
};

/// An operation was called outside its documented precondition.
class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

/// A monotonicity probe whose allocation is not efficient under both profiles.
class InvalidProbe : public Error {
 public:
  using Error::Error;
};

}  // namespace cabne
