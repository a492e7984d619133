#pragma once

#include <stdexcept>
#include <string>

namespace osc {

/// Query outside the domain on which a function is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Lookup outside a table, grid, or history range.
class RangeError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Malformed input (problem file, piecewise description, flags).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Numerical breakdown (non-finite values, divergence).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace osc
