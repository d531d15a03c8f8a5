#pragma once

#include <stdexcept>
#include <string>

namespace icct {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// A required physical parameter was not supplied (and has no defensible default).
struct MissingParameter : Error {
    using Error::Error;
};

/// Donor/acceptor site sets overlap, are empty, or index out of range.
struct InvalidPartition : Error {
    using Error::Error;
};

/// Unphysical bath parameters (negative reorganization energy, non-positive
/// temperature or correlation time, correlation matrix not positive semidefinite, ...).
struct InvalidBath : Error {
    using Error::Error;
};

/// The propagator produced non-finite values or could not satisfy its
/// step-size constraints.
struct IntegrationFailure : Error {
    using Error::Error;
};

/// A frequency or time grid is unusable for the requested operation
/// (too coarse, wrong coverage, mismatched between operands).
struct GridError : Error {
    using Error::Error;
};

/// A transfer-rate sample is negative beyond the numerical noise floor.
struct InvalidRate : Error {
    using Error::Error;
};

/// The embedded direction chain has no unique stationary distribution.
struct DegenerateChain : Error {
    using Error::Error;
};

/// A nonlinear fit did not converge to a meaningful parameter set.
struct FitFailure : Error {
    using Error::Error;
};

/// The simulated time window is too short to capture the waiting-time
/// distribution (transfer has not entered its steady decay regime).
struct GridTooShort : Error {
    using Error::Error;
};

/// Malformed or inconsistent run configuration.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace icct
