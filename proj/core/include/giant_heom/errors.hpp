#pragma once

#include <stdexcept>
#include <string>

namespace giant_heom {

// Malformed or out-of-range user input (config files, CLI flags, fit JSON).
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A requested structure would exceed the configured memory budget.
class ResourceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A numerical method did not meet its tolerance (quadrature, perturbative series).
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Time integration gave up: step size underflow or a non-finite state.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double failure_time)
        : std::runtime_error(what), failure_time_(failure_time) {}

    double failure_time() const noexcept { return failure_time_; }

private:
    double failure_time_;
};

}  // namespace giant_heom
