#pragma once

#include <stdexcept>
#include <string>

namespace uff {

/// Base of every error raised by the simulator. The CLI maps these onto
/// exit status 2 (numerical failure) unless a subclass says otherwise.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the documented domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// Laser tuned onto (or within a natural linewidth of) an excited level.
class ResonanceError : public Error {
public:
    ResonanceError(const std::string& what, int excited_f)
        : Error(what), excited_f_(excited_f) {}
    int excited_f() const noexcept { return excited_f_; }

private:
    int excited_f_;
};

/// Bracketed root search found no sign change.
class NoSolutionError : public Error {
public:
    using Error::Error;
};

/// ODE propagation lost unitarity beyond tolerance.
class IntegrationError : public Error {
public:
    using Error::Error;
};

class CalibrationError : public Error {
public:
    using Error::Error;
};

class FitError : public Error {
public:
    using Error::Error;
};

/// Fringe fit succeeded but the phase carries no information (zero contrast).
class UnconstrainedPhaseError : public FitError {
public:
    using FitError::FitError;
};

/// Bad configuration key/value or malformed input file. Exit status 1.
class ConfigError : public Error {
public:
    using Error::Error;
};

} // namespace uff
