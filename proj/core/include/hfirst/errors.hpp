#pragma once

#include <stdexcept>
#include <string>

namespace hfirst {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed byte stream or text while decoding events or models.
/// The message always carries the byte or line offset of the defect.
struct DecodeError : Error {
    using Error::Error;
};

/// Structurally valid input that violates a contract (coordinate out of
/// range, unsorted stream handed to the encoder, time regression, ...).
struct ValidationError : Error {
    using Error::Error;
};

/// Bad or contradictory configuration (unknown key, out-of-range value,
/// mutually exclusive flags).
struct ConfigError : Error {
    using Error::Error;
};

/// Filesystem-level failure (missing file, unwritable directory).
struct IoError : Error {
    using Error::Error;
};

/// Training could not produce a usable model (empty stream, a class with no
/// counts, duplicate labels). The message names the offending class.
struct TrainError : Error {
    using Error::Error;
};

} // namespace hfirst
