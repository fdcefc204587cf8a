#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scat1d {

// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Invalid construction data (e.g. mismatched conjugate mode pairs).
struct ConstructionError : Error {
    using Error::Error;
};

// A coefficient or potential evaluation produced a non-finite value,
// or violated the reality bound.  Carries the offending abscissa.
struct EvalError : Error {
    double x;
    EvalError(const std::string& msg, double where) : Error(msg), x(where) {}
};

// Argument outside the admissible domain (wave number outside the analyticity
// strip, evaluation outside the solved interval, truncation radius inside the
// potential support, evolution domain too small, ...).
struct DomainError : Error {
    using Error::Error;
};

// Bad or inconsistent configuration values.
struct ConfigError : Error {
    using Error::Error;
};

// The ODE integrator failed (step size underflow); carries the location.
struct SolverError : Error {
    double x;
    SolverError(const std::string& msg, double where) : Error(msg), x(where) {}
};

// A conserved quantity drifted beyond its tolerance (Wronskian constancy,
// imaginary part on the imaginary axis, mass conservation).
struct ConditioningError : Error {
    double drift;
    ConditioningError(const std::string& msg, double d) : Error(msg), drift(d) {}
};

// Adaptive quadrature did not converge; carries the achieved error estimate.
struct QuadratureError : Error {
    double estimate;
    QuadratureError(const std::string& msg, double est) : Error(msg), estimate(est) {}
};

// Evaluation too close to a transmission pole (vanishing Wronskian).
struct PoleProximityError : Error {
    using Error::Error;
};

// Root bracketing failed: either no sign change in the search interval, or
// several sign changes (ambiguous bracket; the candidates are listed).
struct BracketError : Error {
    std::vector<std::pair<double, double>> sub_brackets;
    explicit BracketError(const std::string& msg,
                          std::vector<std::pair<double, double>> candidates = {})
        : Error(msg), sub_brackets(std::move(candidates)) {}
};

// An operation's precondition does not hold (e.g. a generic background where
// a non-generic one is required, or unnormalized bound states).
struct PreconditionError : Error {
    using Error::Error;
};

// A data fit could not be performed (insufficient span or samples).
struct FitError : Error {
    using Error::Error;
};

}  // namespace scat1d
