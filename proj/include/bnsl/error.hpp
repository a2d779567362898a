#pragma once

#include <stdexcept>
#include <string>

namespace bnsl {

// Base of every error raised by the library. The CLI maps UsageError and
// ConfigError to exit code 2 and everything else to exit code 1.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dimension or arity mismatch between a model and the values handed to it.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Malformed input file. The message carries the line/field context.
class ParseError : public Error {
 public:
  using Error::Error;
};

// A structural invariant of a network, dataset or genome does not hold.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Scoring a zero-row dataset.
class EmptyDataError : public Error {
 public:
  using Error::Error;
};

class EncodingError : public Error {
 public:
  using Error::Error;
};

class EngineError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  using Error::Error;
};

}  // namespace bnsl
