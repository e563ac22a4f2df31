// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/jdl/eval.hpp"

#include <cmath>
#include <limits>

namespace worldgrid::jdl {

namespace {

// Bounds recursion through self-referencing attributes (A = B; B = A;).
constexpr int kMaxSelfDepth = 32;

class Evaluator {
 public:
  explicit Evaluator(const EvalEnv& env) : env_(env) {}

  Value eval(const Expr& e) {
    return std::visit([&](const auto& node) { return visit(node); }, e.node);
  }

 private:
  Value visit(const Literal& lit) { return lit.value; }

  Value visit(const AttrRef& ref) {
    if (ref.scope == AttrScope::Other) {
      if (env_.other == nullptr) return Undefined{};
      const auto it = env_.other->find(ref.name);
      return it == env_.other->end() ? Value(Undefined{}) : it->second;
    }
    if (env_.self == nullptr) return Undefined{};
    const auto it = env_.self->find(ref.name);
    if (it == env_.self->end() || !it->second || depth_ >= kMaxSelfDepth) return Undefined{};
    ++depth_;
    auto v = eval(*it->second);
    --depth_;
    return v;
  }

  Value visit(const Unary& u) {
    const auto v = eval(*u.operand);
    if (u.op == UnaryOp::Not) return v.is_bool() ? Value(!v.as_bool()) : Value(Undefined{});
    if (v.is_int()) {
      if (v.as_int() == std::numeric_limits<std::int64_t>::min()) return Undefined{};
      return Value(-v.as_int());
    }
    if (v.is_double()) return Value(-v.as_double());
    return Undefined{};
  }

  Value visit(const Binary& b) {
    if (b.op == BinaryOp::And) {
      const auto l = eval(*b.lhs);
      if (l.is_false()) return false;
      const auto r = eval(*b.rhs);
      if (r.is_false()) return false;
      if (l.is_true() && r.is_true()) return true;
      return Undefined{};
    }
    if (b.op == BinaryOp::Or) {
      const auto l = eval(*b.lhs);
      if (l.is_true()) return true;
      const auto r = eval(*b.rhs);
      if (r.is_true()) return true;
      if (l.is_false() && r.is_false()) return false;
      return Undefined{};
    }
    const auto l = eval(*b.lhs);
    const auto r = eval(*b.rhs);
    switch (b.op) {
      case BinaryOp::Add:
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
        return arithmetic(b.op, l, r);
      default:
        return compare(b.op, l, r);
    }
  }

  Value visit(const ListExpr& list) {
    Value::List items;
    items.reserve(list.items.size());
    for (const auto& item : list.items) items.push_back(eval(*item));
    return Value(std::move(items));
  }

  Value visit(const Call& call) {
    if (!iequals(call.function, "member") || call.args.size() != 2) return Undefined{};
    auto value = eval(*call.args[0]);
    auto list = eval(*call.args[1]);
    if (!list.is_list() && value.is_list()) std::swap(value, list);
    if (!list.is_list() || value.is_undefined() || value.is_list()) return Undefined{};
    for (const auto& item : list.as_list()) {
      const auto eq = compare(BinaryOp::Eq, value, item);
      if (eq.is_true()) return true;
    }
    return false;
  }

  static Value arithmetic(BinaryOp op, const Value& l, const Value& r) {
    if (!l.is_number() || !r.is_number()) return Undefined{};
    if (l.is_int() && r.is_int()) {
      const auto a = l.as_int();
      const auto b = r.as_int();
      std::int64_t out = 0;
      switch (op) {
        case BinaryOp::Add:
          if (__builtin_add_overflow(a, b, &out)) return Undefined{};
          return out;
        case BinaryOp::Sub:
          if (__builtin_sub_overflow(a, b, &out)) return Undefined{};
          return out;
        case BinaryOp::Mul:
          if (__builtin_mul_overflow(a, b, &out)) return Undefined{};
          return out;
        default:
          if (b == 0 || (a == std::numeric_limits<std::int64_t>::min() && b == -1)) return Undefined{};
          return a / b;
      }
    }
    const double a = l.as_number();
    const double b = r.as_number();
    double out = 0;
    switch (op) {
      case BinaryOp::Add: out = a + b; break;
      case BinaryOp::Sub: out = a - b; break;
      case BinaryOp::Mul: out = a * b; break;
      default:
        if (b == 0.0) return Undefined{};
        out = a / b;
    }
    if (std::isnan(out)) return Undefined{};
    return out;
  }

  static Value compare(BinaryOp op, const Value& l, const Value& r) {
    int cmp = 0;
    if (l.is_number() && r.is_number()) {
      if (l.is_int() && r.is_int()) {
        cmp = l.as_int() < r.as_int() ? -1 : (l.as_int() > r.as_int() ? 1 : 0);
      } else {
        const double a = l.as_number();
        const double b = r.as_number();
        if (std::isnan(a) || std::isnan(b)) return Undefined{};
        cmp = a < b ? -1 : (a > b ? 1 : 0);
      }
    } else if (l.is_string() && r.is_string()) {
      const int c = l.as_string().compare(r.as_string());
      cmp = c < 0 ? -1 : (c > 0 ? 1 : 0);
    } else if (l.is_bool() && r.is_bool()) {
      if (op != BinaryOp::Eq && op != BinaryOp::Ne) return Undefined{};
      cmp = l.as_bool() == r.as_bool() ? 0 : 1;
    } else {
      return Undefined{};
    }
    switch (op) {
      case BinaryOp::Eq: return cmp == 0;
      case BinaryOp::Ne: return cmp != 0;
      case BinaryOp::Lt: return cmp < 0;
      case BinaryOp::Le: return cmp <= 0;
      case BinaryOp::Gt: return cmp > 0;
      case BinaryOp::Ge: return cmp >= 0;
      default: return Undefined{};
    }
  }

  const EvalEnv& env_;
  int depth_ = 0;
};

}  // namespace

Value evaluate(const Expr& expr, const EvalEnv& env) { return Evaluator(env).eval(expr); }

}  // namespace worldgrid::jdl
