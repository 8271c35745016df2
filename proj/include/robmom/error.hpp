#pragma once

#include <stdexcept>
#include <string>

namespace robmom {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument does not hold (domain error).
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Kernel order above the supported cap.
class UnsupportedOrderError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Unrecognized name or malformed text (family specs, parameter names, input files).
class ParseError : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Input that must be sorted was not.
class ContractViolation : public ArgumentError {
public:
    using ArgumentError::ArgumentError;
};

/// Trimming left nothing to average, or a scale estimate collapsed to zero.
class DegenerateError : public Error {
public:
    using Error::Error;
};

/// Inconsistent estimator configuration (e.g. weights that do not sum to one).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Work would exceed the configured budget.
class CapacityError : public Error {
public:
    using Error::Error;
};

/// An exact integer result does not fit in 64 bits.
class OverflowError : public CapacityError {
public:
    using CapacityError::CapacityError;
};

namespace detail {

template <class E = ArgumentError>
inline void require(bool cond, const std::string& what)
{
    if (!cond) throw E(what);
}

} // namespace detail
} // namespace robmom
