#pragma once

#include <stdexcept>
#include <string>

namespace dynlab {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The admission model has a vanishing normalization (e.g. alpha = 1, beta = 0).
class DegenerateModelError : public Error {
 public:
  using Error::Error;
};

/// An update map does not have the monotone S shape the solvers assume.
class ShapeViolationError : public Error {
 public:
  using Error::Error;
};

/// A numerical procedure failed to converge or bracket.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace dynlab
