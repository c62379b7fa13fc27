#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace addforms {

enum class ErrorCode {
  invalid_argument,
  parse_error,
  group_mismatch,
  cap_exceeded,
  io_error,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Syntax error with a 1-based line/column position in the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(ErrorCode::parse_error,
              std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        detail_(message),
        line_(line),
        column_(column) {}

  /// The message without the position prefix.
  const std::string& detail() const noexcept { return detail_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::string detail_;
  std::size_t line_;
  std::size_t column_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace addforms
