// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace worldgrid::jdl::detail {

enum class Tok {
  Ident, String, Integer, Real,
  LParen, RParen, LBracket, RBracket, LBrace, RBrace,
  Comma, Semi, Dot, Assign,
  Eq, Ne, Lt, Le, Gt, Ge, AndAnd, OrOr, Bang, Plus, Minus, Star, Slash,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;  // identifier spelling or decoded string literal
  std::int64_t int_value = 0;
  double real_value = 0;
  std::size_t line = 1;
  std::size_t column = 1;
};

// Throws Error(SyntaxError) on the first bad character.
std::vector<Token> tokenize(std::string_view text);

[[noreturn]] void syntax_error(std::size_t line, std::size_t column, const std::string& what);

}  // namespace worldgrid::jdl::detail
