// errors.hpp — Exception types shared by all wqt modules

#pragma once

#include <stdexcept>
#include <string>

namespace wqt {

// Invalid parameters, configs or arguments. Maps to CLI exit code 1.
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Anything the numerics could not deliver. Maps to CLI exit code 2.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Evaluation at (or numerically on top of) a zero of psi, where psi_dot/psi
// has a pole.
class PoleCondition : public NumericalError {
public:
    explicit PoleCondition(double t)
        : NumericalError("pole condition: psi vanishes at t = " + std::to_string(t)), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class IntegrationFailure : public NumericalError {
public:
    IntegrationFailure(const std::string& what, double t)
        : NumericalError(what + " at t = " + std::to_string(t)), time_(t) {}
    double time() const noexcept { return time_; }

private:
    double time_;
};

class UnitarityViolation : public NumericalError {
public:
    using NumericalError::NumericalError;
};

// File system / serialization failures. Maps to CLI exit code 3.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace wqt
