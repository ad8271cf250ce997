#pragma once

#include <stdexcept>
#include <string>

namespace emoaudionet {

/// Base class for all toolkit errors. CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated.
class InvalidArgumentError : public Error {
public:
    using Error::Error;
};

/// Malformed input file (bad RIFF chunk, broken CSV row, ...).
class DecodeError : public Error {
public:
    using Error::Error;
};

/// Recognized container but unsupported encoding (e.g. 24-bit PCM).
class UnsupportedFormatError : public Error {
public:
    using Error::Error;
};

/// Tensor/parameter shapes do not agree.
class ShapeError : public Error {
public:
    using Error::Error;
};

/// NaN or Inf encountered where finite values are required.
class NumericError : public Error {
public:
    using Error::Error;
};

/// Operation invoked in the wrong state (e.g. ADAM step without gradients).
class StateError : public Error {
public:
    using Error::Error;
};

/// Checkpoint/cache container violates its declared format.
class FormatError : public Error {
public:
    using Error::Error;
};

/// File ends before its declared payload (truncation, corruption).
class IntegrityError : public Error {
public:
    using Error::Error;
};

/// Checkpoint metadata incompatible with the requested task/model.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Manifest or label content fails validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Label value outside its documented range.
class RangeError : public Error {
public:
    using Error::Error;
};

/// Filesystem-level failure (unwritable path, missing file).
class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace emoaudionet
