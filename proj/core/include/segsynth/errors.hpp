#pragma once

#include <stdexcept>
#include <string>

namespace segsynth {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Invalid configuration values, missing capabilities, bad CLI input.
class ConfigError : public Error {
  public:
    using Error::Error;
};

/// Problems reading or writing dataset files and manifests.
class IoError : public Error {
  public:
    using Error::Error;
};

/// Rasters whose shapes or contents break a precondition.
class RasterError : public Error {
  public:
    using Error::Error;
};

/// The backend could not be reached, or answered with a transient failure.
/// Retryable.
class TransportError : public Error {
  public:
    using Error::Error;
};

/// The backend rejected a request, or a message failed to decode. Never retried.
class ProtocolError : public Error {
  public:
    using Error::Error;
};

}  // namespace segsynth
