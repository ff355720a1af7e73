#pragma once

#include <stdexcept>
#include <string>

namespace gccrr {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad configuration or arguments supplied by the caller.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Malformed or inconsistent data (dataset files, records, checkpoints).
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace gccrr
