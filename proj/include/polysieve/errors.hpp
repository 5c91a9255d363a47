#pragma once

#include <stdexcept>
#include <string>

namespace polysieve {

/// Malformed or out-of-domain input (bad polynomial text, dimension mismatch, gcd(a,m) != 1, ...).
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A computation would exceed its enumeration, memory or numeric-range budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Structural violation of a composite object (overlapping factor variables, constant factor).
class StructureError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

} // namespace polysieve
