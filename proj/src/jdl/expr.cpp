// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/jdl/expr.hpp"

#include <cmath>
#include <fmt/format.h>

#include "parser.hpp"

namespace worldgrid::jdl {

namespace {

std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out + "\"";
}

std::string format_double(double d) {
  if (std::isnan(d)) return "undefined";
  if (std::isinf(d)) return d > 0 ? "1e999" : "-1e999";
  auto s = fmt::format("{}", d);
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

int precedence(BinaryOp op) {
  switch (op) {
    case BinaryOp::Or: return 1;
    case BinaryOp::And: return 2;
    case BinaryOp::Eq:
    case BinaryOp::Ne:
    case BinaryOp::Lt:
    case BinaryOp::Le:
    case BinaryOp::Gt:
    case BinaryOp::Ge: return 3;
    case BinaryOp::Add:
    case BinaryOp::Sub: return 4;
    case BinaryOp::Mul:
    case BinaryOp::Div: return 5;
  }
  return 0;
}

constexpr int kUnaryPrecedence = 6;
constexpr int kPrimaryPrecedence = 7;

int precedence(const Expr& e) {
  if (const auto* b = std::get_if<Binary>(&e.node)) return precedence(b->op);
  if (std::holds_alternative<Unary>(e.node)) return kUnaryPrecedence;
  if (const auto* lit = std::get_if<Literal>(&e.node)) {
    // A negative number prints with a leading '-', so it binds like a unary.
    const auto& v = lit->value;
    if ((v.is_int() && v.as_int() < 0) || (v.is_double() && std::signbit(v.as_double())))
      return kUnaryPrecedence;
  }
  return kPrimaryPrecedence;
}

std::string wrap(const Expr& e, bool parens) {
  auto s = to_string(e);
  return parens ? "(" + s + ")" : s;
}

bool equal_ptr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurally_equal(*a, *b);
}

}  // namespace

std::string Value::to_string() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Undefined>) return "undefined";
        else if constexpr (std::is_same_v<T, bool>) return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(v);
        else if constexpr (std::is_same_v<T, double>) return format_double(v);
        else if constexpr (std::is_same_v<T, std::string>) return quote(v);
        else {
          std::string out = "{";
          for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].to_string();
          return out + "}";
        }
      },
      data_);
}

Value Value::string_list(const std::vector<std::string>& items) {
  List l;
  l.reserve(items.size());
  for (const auto& s : items) l.emplace_back(s);
  return Value(std::move(l));
}

ExprPtr make_literal(Value v) { return std::make_shared<const Expr>(Expr{Literal{std::move(v)}}); }
ExprPtr make_attr(AttrScope scope, std::string name, bool explicit_scope) {
  return std::make_shared<const Expr>(Expr{AttrRef{scope, std::move(name), explicit_scope}});
}
ExprPtr make_unary(UnaryOp op, ExprPtr operand) {
  return std::make_shared<const Expr>(Expr{Unary{op, std::move(operand)}});
}
ExprPtr make_binary(BinaryOp op, ExprPtr lhs, ExprPtr rhs) {
  return std::make_shared<const Expr>(Expr{Binary{op, std::move(lhs), std::move(rhs)}});
}
ExprPtr make_list(std::vector<ExprPtr> items) {
  return std::make_shared<const Expr>(Expr{ListExpr{std::move(items)}});
}
ExprPtr make_member(ExprPtr value, ExprPtr list) {
  return std::make_shared<const Expr>(Expr{Call{"Member", {std::move(value), std::move(list)}}});
}

std::string_view to_string(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::Eq: return "==";
    case BinaryOp::Ne: return "!=";
    case BinaryOp::Lt: return "<";
    case BinaryOp::Le: return "<=";
    case BinaryOp::Gt: return ">";
    case BinaryOp::Ge: return ">=";
    case BinaryOp::And: return "&&";
    case BinaryOp::Or: return "||";
    case BinaryOp::Add: return "+";
    case BinaryOp::Sub: return "-";
    case BinaryOp::Mul: return "*";
    case BinaryOp::Div: return "/";
  }
  return "?";
}

std::string_view to_string(UnaryOp op) noexcept { return op == UnaryOp::Not ? "!" : "-"; }

bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.node.index() != b.node.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using T = std::decay_t<decltype(x)>;
        const auto& y = std::get<T>(b.node);
        if constexpr (std::is_same_v<T, Literal>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<T, AttrRef>) {
          return x.scope == y.scope && x.explicit_scope == y.explicit_scope && iequals(x.name, y.name);
        } else if constexpr (std::is_same_v<T, Unary>) {
          return x.op == y.op && equal_ptr(x.operand, y.operand);
        } else if constexpr (std::is_same_v<T, Binary>) {
          return x.op == y.op && equal_ptr(x.lhs, y.lhs) && equal_ptr(x.rhs, y.rhs);
        } else if constexpr (std::is_same_v<T, ListExpr>) {
          if (x.items.size() != y.items.size()) return false;
          for (std::size_t i = 0; i < x.items.size(); ++i)
            if (!equal_ptr(x.items[i], y.items[i])) return false;
          return true;
        } else {
          if (!iequals(x.function, y.function) || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!equal_ptr(x.args[i], y.args[i])) return false;
          return true;
        }
      },
      a.node);
}

std::string to_string(const Expr& e) {
  return std::visit(
      [&](const auto& x) -> std::string {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Literal>) {
          return x.value.to_string();
        } else if constexpr (std::is_same_v<T, AttrRef>) {
          if (!x.explicit_scope) return x.name;
          return (x.scope == AttrScope::Other ? "other." : "self.") + x.name;
        } else if constexpr (std::is_same_v<T, Unary>) {
          return std::string(to_string(x.op)) + wrap(*x.operand, precedence(*x.operand) < kUnaryPrecedence);
        } else if constexpr (std::is_same_v<T, Binary>) {
          const int p = precedence(x.op);
          return wrap(*x.lhs, precedence(*x.lhs) < p) + " " + std::string(to_string(x.op)) + " " +
                 wrap(*x.rhs, precedence(*x.rhs) <= p);
        } else if constexpr (std::is_same_v<T, ListExpr>) {
          std::string out = "{";
          for (std::size_t i = 0; i < x.items.size(); ++i) out += (i ? ", " : "") + to_string(*x.items[i]);
          return out + "}";
        } else {
          std::string out = x.function + "(";
          for (std::size_t i = 0; i < x.args.size(); ++i) out += (i ? ", " : "") + to_string(*x.args[i]);
          return out + ")";
        }
      },
      e.node);
}

ExprPtr parse_expression(std::string_view text) {
  detail::Parser p(detail::tokenize(text));
  auto e = p.expression();
  if (!p.at(detail::Tok::End)) p.fail_here("unexpected trailing input");
  return e;
}

}  // namespace worldgrid::jdl
