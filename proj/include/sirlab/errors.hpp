#pragma once

#include <stdexcept>
#include <string>

namespace sirlab {

// Base class for all errors raised by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InvalidInput : Error {
    using Error::Error;
};

// Covariance (or a restriction of it) is not invertible / not SPD.
struct SingularCovariance : Error {
    using Error::Error;
};

// A joint covariance built from (B, rho) is numerically not SPD.
struct Degenerate : Error {
    using Error::Error;
};

// C(p, s) exceeds the configured enumeration cap.
struct EnumerationTooLarge : Error {
    using Error::Error;
};

// Cholesky factorisation failed even after jitter escalation.
struct FactorizationFailed : Error {
    using Error::Error;
};

// A direction with zero total variance was passed to a ratio check.
struct DegenerateDirection : Error {
    using Error::Error;
};

// A stated hypothesis of a bound check (e.g. all label masses < 1/2) fails.
struct HypothesisViolated : Error {
    using Error::Error;
};

// theta maps to rho >= 1.
struct ThetaTooLarge : Error {
    using Error::Error;
};

// Requested problem size exceeds the configured desk-scale budget.
struct ResourceLimit : Error {
    using Error::Error;
};

}  // namespace sirlab
