#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ortglab {

// Errors split into two families: user-facing input problems (bad files,
// bad arguments, infeasible requests) and runtime failures (I/O, network,
// training breakdown). The CLI maps the first family to exit code 1 and
// the second to exit code 2.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual bool user_error() const noexcept { return true; }
};

class ArgumentError : public Error {
 public:
  using Error::Error;
};

class LockConflict : public ArgumentError {
 public:
  LockConflict(const std::string& field, const std::string& what) : ArgumentError(what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public Error {
 public:
  SchemaError(const std::string& column, const std::string& what)
      : Error(what), column_(column) {}
  const std::string& column() const noexcept { return column_; }

 private:
  std::string column_;
};

class ValidationError : public Error {
 public:
  ValidationError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class FitError : public Error {
 public:
  using Error::Error;
};

class MetricError : public Error {
 public:
  using Error::Error;
};

class LoadError : public Error {
 public:
  using Error::Error;
};

class TranslationError : public Error {
 public:
  using Error::Error;
};

class StatusError : public Error {
 public:
  StatusError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }
  bool user_error() const noexcept override { return false; }

 private:
  int status_;
};

class TransportError : public Error {
 public:
  using Error::Error;
  bool user_error() const noexcept override { return false; }
};

class IoError : public Error {
 public:
  using Error::Error;
  bool user_error() const noexcept override { return false; }
};

class TrainingError : public Error {
 public:
  using Error::Error;
  bool user_error() const noexcept override { return false; }
};

}  // namespace ortglab
