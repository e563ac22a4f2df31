// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "parser.hpp"

#include "worldgrid/common/types.hpp"

namespace worldgrid::jdl::detail {

namespace {

constexpr std::size_t kMaxDepth = 256;

struct DepthGuard {
  DepthGuard(std::size_t& depth, const Parser& p) : depth_(depth) {
    if (++depth_ > kMaxDepth) p.fail_here("expression nested too deeply");
  }
  ~DepthGuard() { --depth_; }
  std::size_t& depth_;
};

}  // namespace

void Parser::fail_here(const std::string& what) const {
  const auto& t = peek();
  syntax_error(t.line, t.column, what);
}

const Token& Parser::expect(Tok kind, const char* what) {
  if (!at(kind)) fail_here(std::string("expected ") + what);
  return take();
}

ExprPtr Parser::expression() { return or_expr(); }

ExprPtr Parser::or_expr() {
  auto lhs = and_expr();
  while (at(Tok::OrOr)) {
    take();
    lhs = make_binary(BinaryOp::Or, lhs, and_expr());
  }
  return lhs;
}

ExprPtr Parser::and_expr() {
  auto lhs = comparison();
  while (at(Tok::AndAnd)) {
    take();
    lhs = make_binary(BinaryOp::And, lhs, comparison());
  }
  return lhs;
}

ExprPtr Parser::comparison() {
  auto lhs = additive();
  while (true) {
    BinaryOp op;
    switch (peek().kind) {
      case Tok::Eq: op = BinaryOp::Eq; break;
      case Tok::Ne: op = BinaryOp::Ne; break;
      case Tok::Lt: op = BinaryOp::Lt; break;
      case Tok::Le: op = BinaryOp::Le; break;
      case Tok::Gt: op = BinaryOp::Gt; break;
      case Tok::Ge: op = BinaryOp::Ge; break;
      case Tok::Assign: fail_here("'=' is assignment; use '==' to compare");
      default: return lhs;
    }
    take();
    lhs = make_binary(op, lhs, additive());
  }
}

ExprPtr Parser::additive() {
  auto lhs = multiplicative();
  while (at(Tok::Plus) || at(Tok::Minus)) {
    const auto op = take().kind == Tok::Plus ? BinaryOp::Add : BinaryOp::Sub;
    lhs = make_binary(op, lhs, multiplicative());
  }
  return lhs;
}

ExprPtr Parser::multiplicative() {
  auto lhs = unary();
  while (at(Tok::Star) || at(Tok::Slash)) {
    const auto op = take().kind == Tok::Star ? BinaryOp::Mul : BinaryOp::Div;
    lhs = make_binary(op, lhs, unary());
  }
  return lhs;
}

ExprPtr Parser::unary() {
  DepthGuard guard(depth_, *this);
  if (at(Tok::Bang)) {
    take();
    return make_unary(UnaryOp::Not, unary());
  }
  if (at(Tok::Minus)) {
    take();
    return make_unary(UnaryOp::Negate, unary());
  }
  return primary();
}

ExprPtr Parser::primary() {
  DepthGuard guard(depth_, *this);
  const Token t = take();
  switch (t.kind) {
    case Tok::Integer: return make_literal(Value(t.int_value));
    case Tok::Real: return make_literal(Value(t.real_value));
    case Tok::String: return make_literal(Value(t.text));
    case Tok::LParen: {
      auto e = expression();
      expect(Tok::RParen, "')'");
      return e;
    }
    case Tok::LBrace: {
      std::vector<ExprPtr> items;
      if (!at(Tok::RBrace)) {
        items.push_back(expression());
        while (at(Tok::Comma)) {
          take();
          items.push_back(expression());
        }
      }
      expect(Tok::RBrace, "'}'");
      return make_list(std::move(items));
    }
    case Tok::Ident: {
      if (iequals(t.text, "true")) return make_literal(Value(true));
      if (iequals(t.text, "false")) return make_literal(Value(false));
      if (iequals(t.text, "undefined")) return make_literal(Value(Undefined{}));
      if ((iequals(t.text, "other") || iequals(t.text, "self")) && at(Tok::Dot)) {
        take();
        const auto& name = expect(Tok::Ident, "attribute name after '.'");
        return make_attr(iequals(t.text, "other") ? AttrScope::Other : AttrScope::Self, name.text, true);
      }
      if (at(Tok::LParen)) {
        if (!iequals(t.text, "member")) syntax_error(t.line, t.column, "unknown function '" + t.text + "'");
        take();
        auto first = expression();
        expect(Tok::Comma, "',' between Member arguments");
        auto second = expression();
        expect(Tok::RParen, "')'");
        return make_member(first, second);
      }
      return make_attr(AttrScope::Self, t.text, false);
    }
    case Tok::End:
      syntax_error(t.line, t.column, "unexpected end of input");
    default:
      syntax_error(t.line, t.column, "unexpected token");
  }
}

}  // namespace worldgrid::jdl::detail
