#pragma once

#include <stdexcept>
#include <string>

namespace dirac_ps {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Result not representable in double precision (overflow / underflow).
class RangeError : public std::range_error {
public:
    using std::range_error::range_error;
};

/// Light-cone kinematics violated: E <= kappa makes M non-positive.
class KinematicsError : public DomainError {
public:
    using DomainError::DomainError;
};

/// An integral that should converge does not.
class DivergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Numerical solver failure (bracketing, iteration limits, singular pivots).
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace dirac_ps
