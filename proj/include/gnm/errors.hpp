// errors.hpp — typed error hierarchy shared by all gnm modules

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gnm {

/// Root of all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Matrix or channel dimensions do not match the operation.
struct InvalidDimensionError : Error {
    using Error::Error;
};

/// A value object violates one of its declared invariants.
struct InvariantViolationError : Error {
    using Error::Error;
};

/// Scalar argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// A block that must be inverted is numerically singular.
struct SingularBlockError : Error {
    double singular_value;
    SingularBlockError(const std::string& what, double sv)
        : Error(what), singular_value(sv) {}
};

/// Symplectic-eigenvalue pairing failed beyond tolerance.
struct DegeneracyError : Error {
    using Error::Error;
};

struct UnsupportedChannelError : Error {
    using Error::Error;
};

struct UnsupportedPartitionError : Error {
    using Error::Error;
};

struct UnsupportedFormError : Error {
    using Error::Error;
};

struct NonInvertibleEvolutionError : Error {
    using Error::Error;
};

struct DegenerateEvolutionError : Error {
    using Error::Error;
};

struct IndexError : Error {
    using Error::Error;
};

struct InsufficientDataError : Error {
    using Error::Error;
};

/// Adaptive quadrature could not reach the requested tolerance. Carries the
/// best estimate obtained and the corresponding error bound.
struct AccuracyError : Error {
    double estimate;
    double error_bound;
    AccuracyError(const std::string& what, double est, double bound)
        : Error(what), estimate(est), error_bound(bound) {}
};

/// The ODE stepper failed to advance (step size underflow or bad RHS).
struct IntegrationError : Error {
    using Error::Error;
};

/// Two redundant computation routes disagreed beyond the stated tolerance.
struct ConsistencyError : Error {
    using Error::Error;
};

/// Experiment configuration rejected; carries every violation found.
struct ValidationError : Error {
    std::vector<std::string> violations;
    explicit ValidationError(std::vector<std::string> v)
        : Error(join(v)), violations(std::move(v)) {}

  private:
    static std::string join(const std::vector<std::string>& v) {
        std::string s = "invalid configuration:";
        for (const auto& x : v) s += "\n  - " + x;
        return s;
    }
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace gnm
