#pragma once

#include <stdexcept>
#include <string>

namespace infoforage {

// Raised when arguments violate an operation's preconditions.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Cleaning or truncation left nothing to measure.
class EmptySampleError : public InputError {
 public:
  using InputError::InputError;
};

// Inputs are well-formed but the requested statistic is undefined for them
// (zero variance, a single word type, ...).
class DegenerateInputError : public InputError {
 public:
  using InputError::InputError;
};

}  // namespace infoforage
