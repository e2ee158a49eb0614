#pragma once

#include <stdexcept>
#include <string>

namespace fpnn {

// Exit codes used by the CLI: 0 success, 2 usage, 3 data/schema,
// 4 configuration/compatibility, 5 I/O.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitData = 3,
  kExitConfig = 4,
  kExitIo = 5,
};

class Error : public std::runtime_error {
public:
  Error(std::string msg, int exit_code)
      : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
  int exit_code() const { return exit_code_; }

private:
  int exit_code_;
};

// Bad argument values at an operation boundary (maps to a usage error).
class ArgumentError : public Error {
public:
  explicit ArgumentError(std::string msg) : Error(std::move(msg), kExitUsage) {}
};

// Malformed input data: missing columns/keys, broken CSV quoting.
class SchemaError : public Error {
public:
  explicit SchemaError(std::string msg) : Error(std::move(msg), kExitData) {}
};

class ParseError : public Error {
public:
  explicit ParseError(std::string msg) : Error(std::move(msg), kExitData) {}
};

// Inconsistent tensor shapes.
class ShapeError : public Error {
public:
  explicit ShapeError(std::string msg) : Error(std::move(msg), kExitConfig) {}
};

// Invalid or incompatible configuration (arch spec, checkpoint vs data).
class ConfigError : public Error {
public:
  explicit ConfigError(std::string msg) : Error(std::move(msg), kExitConfig) {}
};

// Malformed checkpoint or dataset file.
class FormatError : public Error {
public:
  explicit FormatError(std::string msg) : Error(std::move(msg), kExitData) {}
};

class IoError : public Error {
public:
  explicit IoError(std::string msg) : Error(std::move(msg), kExitIo) {}
};

}  // namespace fpnn
