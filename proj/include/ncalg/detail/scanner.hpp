#pragma once

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>

#include "ncalg/errors.hpp"

namespace ncalg::detail {

// Cursor over an input string that reports errors with line/column.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  std::size_t position() const noexcept { return pos_; }
  void reset(std::size_t pos) noexcept { pos_ = pos; }
  std::string_view text() const noexcept { return text_; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  // Peek without skipping whitespace.
  char peek_raw() const noexcept { return pos_ < text_.size() ? text_[pos_] : '\0'; }
  char get() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_++] : '\0';
  }
  char get_raw() noexcept { return pos_ < text_.size() ? text_[pos_++] : '\0'; }
  bool consume(char c) {
    if (peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!consume(c)) fail(std::string("expected '") + c + "'");
  }

  // Unsigned decimal digits starting at the current position (after spaces).
  std::string_view digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }

  [[noreturn]] void fail_at(const std::string& message, std::size_t pos) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < pos && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column);
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace ncalg::detail
