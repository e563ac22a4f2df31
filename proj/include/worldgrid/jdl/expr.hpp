// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "worldgrid/jdl/value.hpp"

namespace worldgrid::jdl {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

enum class UnaryOp { Not, Negate };
enum class BinaryOp { Eq, Ne, Lt, Le, Gt, Ge, And, Or, Add, Sub, Mul, Div };
enum class AttrScope { Self, Other };

struct Literal {
  Value value;
};

struct AttrRef {
  AttrScope scope = AttrScope::Self;
  std::string name;
  bool explicit_scope = false;  // written as `self.X` / `other.X` rather than `X`
};

struct Unary {
  UnaryOp op;
  ExprPtr operand;
};

struct Binary {
  BinaryOp op;
  ExprPtr lhs;
  ExprPtr rhs;
};

struct ListExpr {
  std::vector<ExprPtr> items;
};

// `Member(value, list)`. The evaluator also accepts the arguments the other
// way round, picking whichever one is a list.
struct Call {
  std::string function;
  std::vector<ExprPtr> args;
};

struct Expr {
  std::variant<Literal, AttrRef, Unary, Binary, ListExpr, Call> node;
};

ExprPtr make_literal(Value v);
ExprPtr make_attr(AttrScope scope, std::string name, bool explicit_scope = true);
ExprPtr make_unary(UnaryOp op, ExprPtr operand);
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs);
ExprPtr make_list(std::vector<ExprPtr> items);
ExprPtr make_member(ExprPtr value, ExprPtr list);

std::string_view to_string(BinaryOp op) noexcept;
std::string_view to_string(UnaryOp op) noexcept;

// Structural equality of two trees.
bool structurally_equal(const Expr& a, const Expr& b);

// Canonical text with minimal parentheses and normalized spacing.
std::string to_string(const Expr& e);

// Parses a standalone expression. Throws Error(SyntaxError) with line and
// column.
ExprPtr parse_expression(std::string_view text);

}  // namespace worldgrid::jdl
