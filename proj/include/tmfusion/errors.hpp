#pragma once

#include <stdexcept>
#include <string>

namespace tmfusion {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid hyperparameters or run configuration; the message names the field.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Vector or table width does not match the model / spec.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// Unknown class label, feature, or key.
class LookupError : public Error {
public:
    using Error::Error;
};

/// Out-of-range argument to a sampling or generation routine.
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Operation not defined for this model shape (e.g. ASD on a 3-class model).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

/// Descriptions over different feature spaces or class sets.
class ComparisonError : public Error {
public:
    using Error::Error;
};

/// Malformed file or document.
class FormatError : public Error {
public:
    using Error::Error;
};

}  // namespace tmfusion
