#pragma once

#include <stdexcept>
#include <string>

namespace phasegeo {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Point outside the closure of the domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Invalid or inconsistent parameters supplied by the caller.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration (schema violation, bad JSON).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values or an internal numerical inconsistency.
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Gradient flow could not make progress (time step underflow).
class StalledError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// No common tangent exists on the requested bracket.
class NoBitangentError : public NumericError {
 public:
  using NumericError::NumericError;
};

/// The requested construction does not fit in the domain.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A constraint cannot be met by any admissible configuration.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

}  // namespace phasegeo
