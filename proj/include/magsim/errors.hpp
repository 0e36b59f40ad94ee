#pragma once

#include <stdexcept>
#include <string>

namespace magsim {

// Bad input: violated preconditions and invalid parameters. The CLI maps this to exit 1.
class InvalidArgument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Numerical failures surfaced from the core. The CLI maps these to exit 2.
class NumericalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class SingularSystem : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DivisionByZero : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class StepTooCoarse : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class IntensityUnderflow : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class GridTooCoarse : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class DegenerateEta : public NumericalError {
public:
  using NumericalError::NumericalError;
};

class ProfileNonPositive : public NumericalError {
public:
  using NumericalError::NumericalError;
};

} // namespace magsim
