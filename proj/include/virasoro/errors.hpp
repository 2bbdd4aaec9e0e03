#pragma once

#include <stdexcept>
#include <string>

namespace vir {

/// Base class for failures of a numerical procedure on otherwise valid input
/// (under-resolution, divergence, loss of monotonicity). Input validation
/// failures are reported with std::invalid_argument instead.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A diffeomorphism candidate has f' <= 0 somewhere on the grid, or a
/// configured derivative margin was violated.
class MonotonicityLoss : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// An iterative solve exhausted its iteration budget.
class NoConvergence : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// PDE state became non-finite, exceeded the amplitude ceiling, or lost
/// gradient resolution.
class BlowUp : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Hunter-Saxton gauge broken: the zero mode of the momentum drifted.
class ZeroModeViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace vir
