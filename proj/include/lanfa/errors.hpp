#pragma once

#include <stdexcept>
#include <string>

namespace lanfa {

// Base of every error the library raises. Callers that only care about
// "something went wrong numerically" can catch this one.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
public:
    using Error::Error;
};

// A value lies outside the domain of a function, weight, or construction.
class DomainError : public Error {
public:
    using Error::Error;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

// Iterative solver (QL, Remez, AGM) failed to converge within its cap.
class SolverError : public Error {
public:
    using Error::Error;
};

// A shift z sits on (or within tolerance of) an eigenvalue of T.
// distance is |z - nearest Ritz value|; ritz_value is that Ritz value.
class SingularShiftError : public Error {
public:
    SingularShiftError(const std::string& what, double distance, double ritz_value, double shift)
        : Error(what), distance_(distance), ritz_value_(ritz_value), shift_(shift) {}

    double distance() const noexcept { return distance_; }
    double ritz_value() const noexcept { return ritz_value_; }
    double shift() const noexcept { return shift_; }

private:
    double distance_;
    double ritz_value_;
    double shift_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace lanfa
