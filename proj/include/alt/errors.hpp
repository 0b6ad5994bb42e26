#pragma once

#include <stdexcept>
#include <string>

namespace alt {

// Base for every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A documented precondition of an operation was not met by the caller.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

// A point (or a sampling region) lies outside the domain it must belong to.
class DomainError : public Error {
 public:
  using Error::Error;
};

// The two ends of a bisection do not straddle the target set.
class BracketError : public Error {
 public:
  using Error::Error;
};

// Strict preference required by the operation does not hold.
class OrderingError : public Error {
 public:
  using Error::Error;
};

// A solver returned but its post-condition failed when re-checked against the
// oracle. Signals a non-representable or tolerance-broken system.
class ConstructionFailed : public Error {
 public:
  using Error::Error;
};

class ArchimedeanViolation : public Error {
 public:
  using Error::Error;
};

// Target outside what the diagonal of the box can bracket.
class RangeError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace alt
