#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mmlab {

// Input and configuration problems. The CLI maps these to exit code 2.
class InputError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Malformed CSV/JSON content: wrong arity, non-numeric fields, bad header.
class ParseError : public InputError {
public:
  ParseError(std::size_t row, const std::string& what);
  ParseError(const std::string& what) : InputError(what) {}
  std::size_t row() const { return row_; }

private:
  std::size_t row_ = 0;
};

// Well-formed input that breaks a domain invariant (coordinate outside [0,1], volume <= 0, ...).
class ValidationError : public InputError {
public:
  ValidationError(std::size_t row, const std::string& what);
  ValidationError(const std::string& what) : InputError(what) {}
  std::size_t row() const { return row_; }

private:
  std::size_t row_ = 0;
};

class ConfigError : public InputError {
public:
  using InputError::InputError;
};

// Numerical failures during a run. The CLI maps these to exit code 1.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public NumericError {
public:
  using NumericError::NumericError;
};

// Time step violates the transport stability bound.
class StepSizeError : public NumericError {
public:
  using NumericError::NumericError;
};

// Non-finite values produced or consumed by an integrator.
class IntegrationError : public NumericError {
public:
  using NumericError::NumericError;
};

class SingularityError : public NumericError {
public:
  using NumericError::NumericError;
};

// A scheme invariant (positivity, algebraic identity) failed.
class InvariantError : public NumericError {
public:
  using NumericError::NumericError;
};

}  // namespace mmlab
