#pragma once

#include <stdexcept>
#include <string>

namespace qtnsim {

// Rejected inputs: bad arguments, malformed files, violated preconditions.
struct InvalidInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Regular-graph generation exhausted its retry budget.
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A contraction would exceed the configured memory budget.
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bucket schedule violates the elimination invariants.
struct ScheduleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The backend calibration trial could not be completed.
struct CalibrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A result violates a numerical integrity bound (e.g. complex energy).
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace qtnsim
