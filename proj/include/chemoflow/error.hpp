#pragma once

#include <stdexcept>
#include <string>

namespace chemoflow {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid arguments or configuration (bad grid sizes, inadmissible exponents, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// NaN or Inf appeared during a time step.
class StepDiverged : public Error {
public:
    using Error::Error;
};

/// A density dropped below the configured negative tolerance.
class PositivityBreach : public Error {
public:
    using Error::Error;
};

/// File-system or format failure.
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace chemoflow
