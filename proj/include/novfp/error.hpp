#pragma once

#include <stdexcept>
#include <string>

namespace novfp {

/// Base class for every error raised by the library. The CLI maps the
/// concrete subclasses onto exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid parameters or conflicting options (e.g. k > w).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Missing, empty or malformed input data.
class InputError : public Error {
public:
    using Error::Error;
};

/// The embedding backend failed (unreachable, bad shape, NaN output).
class BackendError : public Error {
public:
    using Error::Error;
};

}  // namespace novfp
