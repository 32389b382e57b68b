#pragma once

#include <stdexcept>
#include <string>

namespace kpp_lab {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Bad user input: malformed parameters, unreadable files, out-of-range arguments.
class InputError : public Error {
public:
    using Error::Error;
};

// Reaction term evaluated outside its extended domain [-delta_ext, 1].
class DomainError : public InputError {
public:
    using InputError::InputError;
};

// A nonlinearity that violates the positivity / strict ratio decrease conditions.
class InvalidNonlinearity : public Error {
public:
    using Error::Error;
};

/// Base for failures of a numerical procedure on otherwise valid input.
class NumericalError : public Error {
public:
    using Error::Error;
};

class NoRootError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NoPositiveSolution : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ConvergenceFailure : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class EstimationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class ResourceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class StabilityError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class DomainTooSmall : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace kpp_lab
