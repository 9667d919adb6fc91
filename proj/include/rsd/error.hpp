#pragma once

#include <stdexcept>
#include <string>

namespace rsd {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs violate a documented invariant (probabilities, symmetry, orthogonality).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Sizes of the operands do not agree.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A scalar parameter lies outside its admissible range.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// A mathematical function was evaluated outside its domain.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DecompositionError : public Error {
 public:
  using Error::Error;
};

class DegenerateBasisError : public Error {
 public:
  using Error::Error;
};

/// A search direction with (numerically) zero A-norm.
class DegenerateDirectionError : public Error {
 public:
  using Error::Error;
};

/// A solver or experiment configuration cannot be run as requested.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace rsd
