#pragma once

#include <stdexcept>
#include <string>

namespace caseq {

// Base of everything the library throws on bad input or impossible requests.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// A closed-form factorization was asked for at a level it does not cover.
class UnsupportedLevelError : public DomainError {
public:
    using DomainError::DomainError;
};

// The request is well formed but has no solution (e.g. augmentation without
// a Restriction-A decomposition).
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// Frequency grid too coarse for the requested spectrum.
class ResolutionError : public DomainError {
public:
    using DomainError::DomainError;
};

// Not enough data points (lobes, trials) for an estimate.
class InsufficientDataError : public Error {
public:
    using Error::Error;
};

// Malformed file or serialized input.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace caseq
