// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "lexer.hpp"

#include <cctype>
#include <charconv>
#include <fmt/format.h>

#include "worldgrid/common/error.hpp"

namespace worldgrid::jdl::detail {

void syntax_error(std::size_t line, std::size_t column, const std::string& what) {
  throw Error(ErrorCode::SyntaxError, fmt::format("line {}, column {}: {}", line, column, what));
}

namespace {

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    while (true) {
      skip_blank();
      Token t;
      t.line = line_;
      t.column = column_;
      if (pos_ >= text_.size()) {
        out.push_back(t);
        return out;
      }
      const char c = text_[pos_];
      if (ident_start(c)) {
        const auto start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (digit(c)) {
        number(t);
      } else if (c == '"') {
        string(t);
      } else {
        punct(t);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  char peek(std::size_t off = 0) const { return pos_ + off < text_.size() ? text_[pos_ + off] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '#' || (c == '/' && peek(1) == '/')) {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else {
        return;
      }
    }
  }

  void number(Token& t) {
    const auto start = pos_;
    bool real = false;
    while (digit(peek())) advance();
    if (peek() == '.' && digit(peek(1))) {
      real = true;
      advance();
      while (digit(peek())) advance();
    }
    if (peek() == 'e' || peek() == 'E') {
      std::size_t off = 1;
      if (peek(1) == '+' || peek(1) == '-') off = 2;
      if (digit(peek(off))) {
        real = true;
        for (std::size_t i = 0; i < off; ++i) advance();
        while (digit(peek())) advance();
      }
    }
    if (ident_char(peek())) syntax_error(line_, column_, "malformed number");
    const auto spelled = text_.substr(start, pos_ - start);
    const auto* first = spelled.data();
    const auto* last = first + spelled.size();
    if (real) {
      t.kind = Tok::Real;
      const auto res = std::from_chars(first, last, t.real_value);
      if (res.ec != std::errc{} || res.ptr != last) syntax_error(t.line, t.column, "real literal out of range");
    } else {
      t.kind = Tok::Integer;
      const auto res = std::from_chars(first, last, t.int_value);
      if (res.ec != std::errc{} || res.ptr != last) syntax_error(t.line, t.column, "integer literal out of range");
    }
  }

  void string(Token& t) {
    advance();
    t.kind = Tok::String;
    while (true) {
      if (pos_ >= text_.size()) syntax_error(t.line, t.column, "unterminated string");
      const char c = text_[pos_];
      if (c == '"') {
        advance();
        return;
      }
      if (c == '\\') {
        const auto l = line_, col = column_;
        advance();
        if (pos_ >= text_.size()) syntax_error(t.line, t.column, "unterminated string");
        switch (text_[pos_]) {
          case '"': t.text += '"'; break;
          case '\\': t.text += '\\'; break;
          case 'n': t.text += '\n'; break;
          case 't': t.text += '\t'; break;
          default: syntax_error(l, col, "unknown escape sequence");
        }
        advance();
        continue;
      }
      t.text += c;
      advance();
    }
  }

  void punct(Token& t) {
    const char c = text_[pos_];
    const char n = peek(1);
    auto two = [&](Tok k) {
      t.kind = k;
      advance();
      advance();
    };
    auto one = [&](Tok k) {
      t.kind = k;
      advance();
    };
    switch (c) {
      case '(': return one(Tok::LParen);
      case ')': return one(Tok::RParen);
      case '[': return one(Tok::LBracket);
      case ']': return one(Tok::RBracket);
      case '{': return one(Tok::LBrace);
      case '}': return one(Tok::RBrace);
      case ',': return one(Tok::Comma);
      case ';': return one(Tok::Semi);
      case '.': return one(Tok::Dot);
      case '+': return one(Tok::Plus);
      case '-': return one(Tok::Minus);
      case '*': return one(Tok::Star);
      case '/': return one(Tok::Slash);
      case '=': return n == '=' ? two(Tok::Eq) : one(Tok::Assign);
      case '!': return n == '=' ? two(Tok::Ne) : one(Tok::Bang);
      case '<': return n == '=' ? two(Tok::Le) : one(Tok::Lt);
      case '>': return n == '=' ? two(Tok::Ge) : one(Tok::Gt);
      case '&':
        if (n == '&') return two(Tok::AndAnd);
        break;
      case '|':
        if (n == '|') return two(Tok::OrOr);
        break;
      default:
        break;
    }
    const auto byte = static_cast<unsigned char>(c);
    if (std::isprint(byte)) syntax_error(line_, column_, fmt::format("unexpected character '{}'", c));
    syntax_error(line_, column_, fmt::format("unexpected byte 0x{:02x}", byte));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace worldgrid::jdl::detail
