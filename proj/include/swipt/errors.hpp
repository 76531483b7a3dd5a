#pragma once

#include <stdexcept>
#include <string>

namespace swipt {

// Bad user input: malformed files, violated preconditions on supplied data.
// The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation could not produce a trustworthy number. Exit code 1.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

class InvariantError : public InputError {
 public:
  using InputError::InputError;
};

class InsufficientDataError : public InputError {
 public:
  using InputError::InputError;
};

class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class RangeError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Received power beyond the diode's breakdown bound.
class BreakdownError : public NumericError {
 public:
  using NumericError::NumericError;
};

class BracketError : public NumericError {
 public:
  using NumericError::NumericError;
};

class ResolutionError : public NumericError {
 public:
  using NumericError::NumericError;
};

class InconsistencyError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace swipt
