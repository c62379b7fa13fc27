#include "addforms/text.hpp"

#include <cctype>

namespace addforms::text {

void Cursor::advance() {
  if (input_[pos_] == '\n') {
    ++line_;
    column_ = 1;
  } else {
    ++column_;
  }
  ++pos_;
}

void Cursor::skip_space() {
  while (pos_ < input_.size() && std::isspace(static_cast<unsigned char>(input_[pos_]))) advance();
}

bool Cursor::at_end() {
  skip_space();
  return pos_ >= input_.size();
}

char Cursor::peek() {
  skip_space();
  return pos_ < input_.size() ? input_[pos_] : '\0';
}

bool Cursor::accept(char c) {
  if (peek() != c || c == '\0') return false;
  advance();
  return true;
}

void Cursor::expect(char c) {
  if (!accept(c)) {
    if (pos_ >= input_.size()) error(std::string("expected '") + c + "' but reached end of input");
    error(std::string("expected '") + c + "' but found '" + input_[pos_] + "'");
  }
}

bool Cursor::accept_word(std::string_view word) {
  skip_space();
  if (input_.substr(pos_, word.size()) != word) return false;
  for (std::size_t i = 0; i < word.size(); ++i) advance();
  return true;
}

bool Cursor::peek_digit() { return std::isdigit(static_cast<unsigned char>(peek())) != 0; }

bool Cursor::peek_alpha() { return std::isalpha(static_cast<unsigned char>(peek())) != 0; }

BigInt Cursor::integer() {
  if (!peek_digit()) {
    if (pos_ >= input_.size()) error("expected integer but reached end of input");
    error(std::string("expected integer but found '") + input_[pos_] + "'");
  }
  BigInt value = 0;
  while (pos_ < input_.size() && std::isdigit(static_cast<unsigned char>(input_[pos_]))) {
    value = value * 10 + (input_[pos_] - '0');
    advance();
  }
  return value;
}

std::string Cursor::identifier() {
  if (!peek_alpha()) error("expected identifier");
  std::string out;
  while (pos_ < input_.size() && std::isalpha(static_cast<unsigned char>(input_[pos_]))) {
    out += input_[pos_];
    advance();
  }
  while (pos_ < input_.size() && std::isdigit(static_cast<unsigned char>(input_[pos_]))) {
    out += input_[pos_];
    advance();
  }
  return out;
}

void Cursor::error(const std::string& message) const { throw ParseError(message, line_, column_); }

void Cursor::expect_end() {
  if (!at_end()) error(std::string("unexpected trailing input '") + input_[pos_] + "'");
}

}  // namespace addforms::text
