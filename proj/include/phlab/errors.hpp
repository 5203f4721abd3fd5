#pragma once

#include <stdexcept>
#include <string>

namespace phlab {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input bytes (bad header, truncated stream, ...).
struct DecodeError : Error {
    using Error::Error;
};

// Valid but unhandled encoding (bit depth, color type, maxval).
struct UnsupportedFormatError : DecodeError {
    using DecodeError::DecodeError;
};

// A caller violated an operation's precondition.
struct ContractError : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

struct ConfigError : Error {
    using Error::Error;
};

// Feature-file embedder was asked about an image id it does not know.
struct MissingFeatureError : Error {
    using Error::Error;
};

}  // namespace phlab
