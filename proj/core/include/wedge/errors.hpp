#pragma once

#include <stdexcept>
#include <string>

namespace wedge {

/// Bad input: malformed config, violated precondition, non-elliptic data.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// The computation ran but its result cannot be trusted (failed linear
/// solve, divergent quadrature, unstable fit).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace wedge
