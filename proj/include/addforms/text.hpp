#pragma once

#include "addforms/error.hpp"
#include "addforms/rational.hpp"

#include <cstddef>
#include <string>
#include <string_view>

namespace addforms::text {

/// Character cursor over DSL input with line/column tracking. Whitespace is
/// skipped by the `peek`/`accept` family; `raw_*` accessors do not skip.
class Cursor {
 public:
  explicit Cursor(std::string_view input) : input_(input) {}

  void skip_space();
  bool at_end();
  char peek();
  bool accept(char c);
  void expect(char c);
  bool accept_word(std::string_view word);

  /// Unsigned decimal literal; fails if none is present.
  BigInt integer();
  bool peek_digit();
  bool peek_alpha();
  /// Identifier of the form [A-Za-z]+[0-9]* (no whitespace inside).
  std::string identifier();

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  std::size_t offset() const { return pos_; }

  [[noreturn]] void error(const std::string& message) const;
  void expect_end();

 private:
  void advance();

  std::string_view input_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace addforms::text
