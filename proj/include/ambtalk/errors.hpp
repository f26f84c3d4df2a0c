#pragma once

#include <stdexcept>
#include <string>

namespace ambtalk {

// Precondition violations on user-supplied inputs (bad interval, sigma <= 0, ...).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Failures inside a numerical routine: non-finite evaluations, refinement
// limits, missing sign changes.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Restriction of a density to an interval that carries no reference mass.
class ZeroMassError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace ambtalk
