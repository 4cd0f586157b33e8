#pragma once

#include <stdexcept>
#include <string>

namespace vdw {

// Base of every error thrown by the library. Callers that only need a
// one-line cause can catch this and print what().
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Malformed input text (tables, spec strings).
class ParseError : public Error {
 public:
  using Error::Error;
};

// Well-formed input that violates a data invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Inconsistent model setup, e.g. a metal table without low-frequency data.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Evaluation outside tabulated data; there is no extrapolation.
class RangeError : public Error {
 public:
  using Error::Error;
};

// Quadrature or series did not reach the requested accuracy.
class NumericalError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace vdw
