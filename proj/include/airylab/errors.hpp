#pragma once

#include <stdexcept>

namespace airylab {

// Caller handed us something outside a documented precondition.
struct DomainError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A numerical routine could not meet its contract (bracket exhausted,
// no convergence, truncation too shallow).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem or serialization failure.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace airylab
