#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hfj {

/// Base class of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition or compatibility failure (size mismatch, unsupported field, ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Malformed text input. Line and column are 1-based; 0 means unknown.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t line = 0, std::size_t column = 0)
      : Error(what), line_(line), column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// Data that violates a mathematical consistency condition. `witness` names the
/// offending indices in the text formats of the library.
class ConsistencyError : public Error {
 public:
  ConsistencyError(const std::string& what, std::string witness)
      : Error(what + ": " + witness), witness_(std::move(witness)) {}

  const std::string& witness() const noexcept { return witness_; }

 private:
  std::string witness_;
};

/// Requested output reaches beyond the truncation of the input data.
class TruncationError : public ConsistencyError {
 public:
  using ConsistencyError::ConsistencyError;
};

}  // namespace hfj
