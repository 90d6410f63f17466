#pragma once

#include <stdexcept>
#include <string>

namespace opsplit {

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

struct NonFiniteValue : Error {
    using Error::Error;
};

/// Raised when forward evaluation is requested on an operator (or at a point)
/// that only supports resolvent evaluation.
struct NotForwardEvaluable : Error {
    using Error::Error;
};

/// A resolvent-only operator was queried at a step size other than the one it
/// was defined for.
struct GammaMismatch : Error {
    using Error::Error;
};

/// The linear system behind a resolvent or fixed-point solve is numerically
/// singular; usually signals a non-monotone operator being misused.
struct SingularSystem : Error {
    using Error::Error;
};

struct NotSupported : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

/// The (1/gamma, beta) product norm is not positive definite (gamma >= beta).
struct InvalidMetric : Error {
    using Error::Error;
};

struct NotAFixedPoint : Error {
    using Error::Error;
};

struct NotASolution : Error {
    using Error::Error;
};

struct InvalidAlpha : Error {
    using Error::Error;
};

/// A structural invariant of an operator or problem failed at construction.
struct InvariantViolation : Error {
    using Error::Error;
};

/// Serialized problem or config data does not match the schema. The message
/// names the offending field path (e.g. "lip.mu").
struct SchemaViolation : Error {
    explicit SchemaViolation(const std::string& path, const std::string& what)
        : Error("schema violation at '" + path + "': " + what), field_path(path) {}
    std::string field_path;
};

struct ConfigError : Error {
    using Error::Error;
};

struct ProblemLoadError : Error {
    using Error::Error;
};

}  // namespace opsplit
