#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace bireduct {

enum class ErrorKind {
  ZeroSide,
  DimensionMismatch,
  OutOfRange,
  DuplicateTarget,
  SyntaxError,
  TooSmall,
  TooLarge,
  InvalidArgument,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ZeroSide: return "ZeroSide";
    case ErrorKind::DimensionMismatch: return "DimensionMismatch";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::DuplicateTarget: return "DuplicateTarget";
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::TooSmall: return "TooSmall";
    case ErrorKind::TooLarge: return "TooLarge";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

// All precondition failures in the library surface as this exception.
// Outcomes that are part of an operation's normal range (no decomposition,
// no uniform core, no extension) are returned as empty optionals instead.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Text-format failures carry the 1-based position of the offending byte.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& what)
      : Error(ErrorKind::SyntaxError,
              "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

}  // namespace bireduct
