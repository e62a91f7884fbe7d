#pragma once

#include <stdexcept>
#include <string>

namespace rsf {

// Wrong shapes or mismatched mode counts.
class DimensionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Argument outside the mathematical domain of an operation (beta <= 0, f undefined, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Iterative kernels that fail to converge, or integration steps that leave the valid state set.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// (r, alpha) pair whose correlation matrix is not positive semi-definite.
class StateConsistencyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// The requested quantity is not defined for this generator (e.g. heat with scattering).
class UnsupportedRegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace rsf
