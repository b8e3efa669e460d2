#pragma once

#include <stdexcept>
#include <string>

namespace aivf {

// Base for everything the library throws on bad input.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Invalid arguments or configuration (CLI exit code 1).
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Data that violates a precondition: dimension mismatch, zero-norm row,
// unreachable recall target, ... (CLI exit code 2).
class DataError : public Error {
 public:
  using Error::Error;
};

// Malformed or truncated file (CLI exit code 2).
class FormatError : public DataError {
 public:
  using DataError::DataError;
};

class IoError : public DataError {
 public:
  using DataError::DataError;
};

}  // namespace aivf
