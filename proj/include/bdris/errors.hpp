#ifndef BDRIS_ERRORS_HPP
#define BDRIS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace bdris {

/// Numerical failure (non-finite values, decomposition breakdown, ...).
/// Maps to exit code 2 at the CLI boundary.
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A linear system that was expected to have full (row or column) rank
/// turned out rank-deficient at the working tolerance.
struct SingularSystemError : NumericalError {
    using NumericalError::NumericalError;
};

/// Bad user input: malformed config files, out-of-range parameters,
/// pilot budgets below the identifiability minimum. Exit code 1.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace bdris

#endif
