#pragma once

#include <stdexcept>
#include <string>

namespace pptbound {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Incompatible or invalid matrix/state dimensions.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Input has the wrong structural form (non-Hermitian, wrong block layout, ...).
class ShapeError : public Error {
public:
    using Error::Error;
};

/// Invalid caller-supplied parameter value.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Requested size exceeds the configured dimension cap.
class SizeError : public ParameterError {
public:
    using ParameterError::ParameterError;
};

/// Factor selector names a nonexistent factor or is empty/duplicated.
class SelectorError : public Error {
public:
    using Error::Error;
};

/// Matrix expected to be positive semidefinite is not.
class NotPsdError : public Error {
public:
    using Error::Error;
};

/// Vector or distribution fails its normalization requirement.
class NormalizationError : public Error {
public:
    using Error::Error;
};

/// Measurement outcome has (near-)zero probability; conditional state undefined.
class DegenerateOutcomeError : public Error {
public:
    using Error::Error;
};

/// A constructed operator violates the guarantees of its construction.
class ConstructionError : public Error {
public:
    using Error::Error;
};

/// Rejection sampling exhausted its attempt budget.
class SamplingError : public Error {
public:
    using Error::Error;
};

/// An operation was called outside its stated hypotheses.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Two independently computed quantities that must agree do not.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

/// Malformed or unreadable input file.
class IoError : public Error {
public:
    using Error::Error;
};

/// Iterative solver failed to converge within its budget.
class ConvergenceError : public Error {
public:
    using Error::Error;
};

} // namespace pptbound
