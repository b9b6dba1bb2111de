#pragma once

#include <stdexcept>
#include <string>

namespace sfa {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A query point lies outside the region where an object is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Inputs violate an operation's documented preconditions.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// The operation is well defined but does not apply to this input, e.g. a
// singular-endpoint criterion evaluated at a regular endpoint.
class NotApplicable : public Error {
 public:
  using Error::Error;
};

// An iterative or adaptive numerical procedure failed to converge.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// A problem file or table is missing, unreadable or malformed.
class InputError : public Error {
 public:
  using Error::Error;
};

}  // namespace sfa
