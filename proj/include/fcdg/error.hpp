#pragma once

#include <stdexcept>
#include <string>

namespace fcdg {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid construction parameters (basis sizes, quadrature orders, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Vector or matrix dimensions that do not match.
class ShapeError : public Error {
 public:
  using Error::Error;
};

/// Malformed operator cache file.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Operator cache that parses but fails its checksum or invariants.
class IntegrityError : public Error {
 public:
  using Error::Error;
};

/// Linear-algebra failure (singular matrix, eigensolver did not converge).
class NumericError : public Error {
 public:
  using Error::Error;
};

/// Non-finite values appeared while time stepping.
class DivergenceError : public Error {
 public:
  using Error::Error;
};

/// Bad experiment configuration (unknown key, wrong type, missing file).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace fcdg
