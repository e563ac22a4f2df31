// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <vector>

#include "lexer.hpp"
#include "worldgrid/jdl/expr.hpp"

namespace worldgrid::jdl::detail {

// Recursive-descent parser over a token stream. Precedence, loosest first:
// ||, &&, comparisons, + -, * /, unary ! -.
class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  ExprPtr expression();

  const Token& peek() const { return tokens_[pos_]; }
  const Token& take() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }
  bool at(Tok kind) const { return peek().kind == kind; }
  const Token& expect(Tok kind, const char* what);
  [[noreturn]] void fail_here(const std::string& what) const;

 private:
  ExprPtr or_expr();
  ExprPtr and_expr();
  ExprPtr comparison();
  ExprPtr additive();
  ExprPtr multiplicative();
  ExprPtr unary();
  ExprPtr primary();

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

}  // namespace worldgrid::jdl::detail
