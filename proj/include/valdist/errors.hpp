#pragma once

#include <stdexcept>
#include <string>

namespace valdist {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition does not hold (bad sizes, zero input, out of range).
class DomainError : public Error {
public:
  using Error::Error;
};

/// The curve or target is degenerate for the requested quantity
/// (image inside the support, identically vanishing derived curve, ...).
class DegenerateError : public Error {
public:
  using Error::Error;
};

/// An iterative method ran out of budget.
class ConvergenceError : public Error {
public:
  using Error::Error;
};

/// Two multivariate polynomials live over different variable registries.
class RegistryMismatch : public Error {
public:
  using Error::Error;
};

} // namespace valdist
