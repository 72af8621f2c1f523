#pragma once

#include <stdexcept>
#include <string>

namespace caustica {

// Base of everything the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input that fails schema or structural validation. The CLI maps these to
// exit status 2; everything else is a numeric failure (exit status 3).
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " (at byte " + std::to_string(position) + ")"),
        position_(position) {}
  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class ValidationError : public InputError {
 public:
  using InputError::InputError;
};

class NumericError : public Error {
 public:
  using Error::Error;
};

// Argument outside the domain of a function (e.g. t outside [0, T]).
class DomainError : public NumericError {
 public:
  using NumericError::NumericError;
};

class InvalidInputError : public NumericError {
 public:
  using NumericError::NumericError;
};

class IntegrationError : public NumericError {
 public:
  IntegrationError(const std::string& what, double time)
      : NumericError(what + " (t = " + std::to_string(time) + ")"), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

// Jacobi field touches zero without crossing; Morse counting is undefined.
class TangentialZeroError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Regular-branch quantity requested for a critical potential.
class CriticalPotentialError : public NumericError {
 public:
  using NumericError::NumericError;
};

// Critical-branch quantity requested for a non-critical potential.
class NotCriticalError : public NumericError {
 public:
  using NumericError::NumericError;
};

class EigenSolverError : public NumericError {
 public:
  EigenSolverError(const std::string& what, int iterations)
      : NumericError(what + " after " + std::to_string(iterations) + " iterations"),
        iterations_(iterations) {}
  int iterations() const noexcept { return iterations_; }

 private:
  int iterations_;
};

class BoundaryLeakError : public NumericError {
 public:
  using NumericError::NumericError;
};

}  // namespace caustica
