#pragma once

#include <stdexcept>

namespace ssir {

// Error taxonomy. The CLI maps each type to a distinct exit code, so keep
// the types stable.

/// Unreadable or malformed input file (exit 2).
struct FieldIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Response carries no sliceable information (exit 3).
struct DegenerateResponseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Covariance (or other matrix required to be SPD) is not positive definite
/// (exit 4).
struct NotPositiveDefiniteError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Rank or dimension mismatch between operands (exit 5).
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Replicate study aborted because too many repetitions failed (exit 6).
struct StudyAbortError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace ssir
