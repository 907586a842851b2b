#pragma once

#include <stdexcept>
#include <string>

namespace symspace {

// Parameters outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Evaluation at (or numerically indistinguishable from) a pole.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A quadrature, series or integrator failed to meet its tolerance.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Discretisation too coarse for the requested accuracy (aliasing, wraparound).
class ResolutionError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace symspace
