#pragma once

#include <stdexcept>
#include <string>

namespace bosegas {

// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or inconsistent run configuration (exit code 2 at the CLI).
struct ConfigError : Error {
    using Error::Error;
};

// Input violates a model assumption (negative coefficient, asymmetry, ...).
struct ValidationError : Error {
    using Error::Error;
};

struct NonHermitianError : ValidationError {
    using ValidationError::ValidationError;
};

// Requested basis or dense matrix exceeds the configured size limit.
struct DimensionOverflow : Error {
    using Error::Error;
};

// Iterative solver failed to reach the requested tolerance (exit code 3).
struct NoConvergence : Error {
    NoConvergence(const std::string& msg, double best_residual)
        : Error(msg), best_residual(best_residual) {}
    double best_residual;
};

// An exact operator identity failed its residual check (exit code 4).
struct IdentityAssertionError : Error {
    using Error::Error;
};

}  // namespace bosegas
