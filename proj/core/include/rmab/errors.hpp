#pragma once

#include <stdexcept>
#include <string>

namespace rmab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed numeric input: non-stochastic rows, out-of-range entries, bad rewards.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Chain is not irreducible or not aperiodic.
class StructureError : public Error {
 public:
  using Error::Error;
};

/// Chain violates detailed balance.
class ReversibilityError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent run parameters (epsilon, delta, arm count, policy names...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A policy observed a reward that is not a state of the arm it played.
class ModelMismatchError : public Error {
 public:
  using Error::Error;
};

/// Argument outside the domain of a formula.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Linear algebra failure that should be impossible for validated input.
class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace rmab
