#pragma once

#include <stdexcept>
#include <string>

namespace crsma {

/// Base class of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidConfiguration : public Error {
public:
    using Error::Error;
};

/// An argument outside the mathematical domain of an operation (negative SINR, α ∉ [0,1]).
class DomainError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

/// Raised when an analytic routine is called for a user count it does not cover.
class DispatchError : public Error {
public:
    using Error::Error;
};

/// A case label that contradicts the channel realization it was paired with.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

class NumericalRangeError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double achieved_error)
        : Error(what), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace crsma
