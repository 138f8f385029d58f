#pragma once

#include <stdexcept>
#include <string>

namespace svcva {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter outside its admissible range (negative vol, q <= 0, ...).
struct DomainError : Error {
    using Error::Error;
};

// Correlation triple fails the positive-definiteness test.
struct CorrelationDomainError : Error {
    using Error::Error;
};

// Unknown builtin parameter set name.
struct UnknownSetError : Error {
    using Error::Error;
};

// A numeric guard tripped (log of a non-positive value, negative variance
// beyond rounding slack, ...).
struct NumericalError : Error {
    using Error::Error;
};

// Fourier integral failed to converge or was truncated too early.
struct QuadratureError : Error {
    using Error::Error;
};

// Control variate with zero variance.
struct DegenerateError : Error {
    using Error::Error;
};

// Model / intensity combination wired inconsistently.
struct PairingError : Error {
    using Error::Error;
};

// Requested expansion order not available for this pairing.
struct UnsupportedPairingError : Error {
    using Error::Error;
};

// CLI / config file problem.
struct ConfigError : Error {
    using Error::Error;
};

} // namespace svcva
