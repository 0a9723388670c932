#pragma once

#include <stdexcept>
#include <string>

namespace sbgk {

// Every error raised by the library derives from Error so callers can map
// failures onto process exit codes in one place.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters, presets or schema violations.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// A value outside the admissible range (|rho| > N, query past the horizon).
class RangeError : public Error {
 public:
  using Error::Error;
};

// Grid or field shapes that do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a closed-form map (negative input to g).
class DomainError : public Error {
 public:
  using Error::Error;
};

// NaN/inf or a diverging iteration.
class NumericalError : public Error {
 public:
  using Error::Error;
};

// An invariant that the scheme guarantees was violated; signals a solver bug.
class StructuralViolation : public Error {
 public:
  using Error::Error;
};

}  // namespace sbgk
