// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/infosys/filter.hpp"

#include <algorithm>
#include <charconv>
#include <optional>

#include "worldgrid/common/error.hpp"

namespace worldgrid::infosys {

namespace {

std::optional<long long> as_integer(std::string_view s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  if (s.empty() || res.ec != std::errc{} || res.ptr != end) return std::nullopt;
  return v;
}

template <typename Cmp>
bool any_numeric(const DirectoryEntry& e, const std::string& attr, const std::string& value, Cmp cmp) {
  const auto rhs = as_integer(value);
  const auto* vals = e.values(attr);
  if (!rhs || vals == nullptr) return false;
  return std::any_of(vals->begin(), vals->end(), [&](const std::string& v) {
    const auto lhs = as_integer(v);
    return lhs && cmp(*lhs, *rhs);
  });
}

std::string escape(std::string_view v) {
  std::string out;
  for (char c : v) {
    if (c == '(' || c == ')' || c == '\\' || c == '*') out += '\\';
    out += c;
  }
  return out;
}

class FilterParser {
 public:
  explicit FilterParser(std::string_view text) : text_(text) {}

  QueryFilter parse_all() {
    skip_space();
    auto f = parse_filter();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return f;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::FilterSyntax,
                "filter syntax error at offset " + std::to_string(pos_) + ": " + what);
  }

  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void expect(char c) {
    skip_space();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  QueryFilter parse_filter() {
    expect('(');
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    QueryFilter f;
    const char c = text_[pos_];
    if (c == '&' || c == '|') {
      ++pos_;
      std::vector<QueryFilter> children;
      skip_space();
      while (pos_ < text_.size() && text_[pos_] == '(') {
        children.push_back(parse_filter());
        skip_space();
      }
      if (children.empty()) fail("'&' and '|' need at least one operand");
      f = c == '&' ? QueryFilter::all_of(std::move(children)) : QueryFilter::any_of(std::move(children));
    } else if (c == '!') {
      ++pos_;
      skip_space();
      f = QueryFilter::negate(parse_filter());
    } else {
      f = parse_item();
    }
    expect(')');
    return f;
  }

  QueryFilter parse_item() {
    const auto start = pos_;
    while (pos_ < text_.size() && text_[pos_] != '=' && text_[pos_] != '>' && text_[pos_] != '<' &&
           text_[pos_] != '(' && text_[pos_] != ')')
      ++pos_;
    const std::string attr(trim(text_.substr(start, pos_ - start)));
    if (attr.empty()) fail("missing attribute name");
    if (attr.find_first_of(" \t&|!") != std::string::npos) fail("bad attribute name '" + attr + "'");
    if (pos_ >= text_.size()) fail("missing operator");
    enum { Eq, Ge, Le } op = Eq;
    if (text_[pos_] == '=') {
      ++pos_;
    } else if ((text_[pos_] == '>' || text_[pos_] == '<') && pos_ + 1 < text_.size() && text_[pos_ + 1] == '=') {
      op = text_[pos_] == '>' ? Ge : Le;
      pos_ += 2;
    } else {
      fail("expected '=', '>=' or '<='");
    }
    std::string value;
    bool wildcard = false;
    bool escaped_any = false;
    while (pos_ < text_.size() && text_[pos_] != ')') {
      char ch = text_[pos_];
      if (ch == '(') fail("unescaped '(' in value");
      if (ch == '\\') {
        if (++pos_ >= text_.size()) fail("dangling escape");
        ch = text_[pos_];
        escaped_any = true;
      } else if (ch == '*') {
        wildcard = true;
      }
      value += ch;
      ++pos_;
    }
    if (op == Eq && wildcard) {
      if (value != "*" || escaped_any) fail("substring wildcards are not supported");
      return QueryFilter::presence(attr);
    }
    if (value.empty()) fail("empty value");
    if (op == Ge) return QueryFilter::greater_eq(attr, value);
    if (op == Le) return QueryFilter::less_eq(attr, value);
    if (iequals(attr, "objectClass")) return QueryFilter::object_class(value);
    return QueryFilter::equality(attr, value);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

QueryFilter QueryFilter::always() { return {}; }

QueryFilter QueryFilter::equality(std::string attribute, std::string value) {
  return {Kind::Equality, std::move(attribute), std::move(value), {}};
}
QueryFilter QueryFilter::presence(std::string attribute) {
  return {Kind::Presence, std::move(attribute), {}, {}};
}
QueryFilter QueryFilter::object_class(std::string name) {
  return {Kind::ObjectClassIs, "objectClass", std::move(name), {}};
}
QueryFilter QueryFilter::greater_eq(std::string attribute, std::string value) {
  return {Kind::GreaterEq, std::move(attribute), std::move(value), {}};
}
QueryFilter QueryFilter::less_eq(std::string attribute, std::string value) {
  return {Kind::LessEq, std::move(attribute), std::move(value), {}};
}
QueryFilter QueryFilter::all_of(std::vector<QueryFilter> children) {
  if (children.empty()) throw Error(ErrorCode::InvalidArgument, "And filter needs at least one child");
  return {Kind::And, {}, {}, std::move(children)};
}
QueryFilter QueryFilter::any_of(std::vector<QueryFilter> children) {
  if (children.empty()) throw Error(ErrorCode::InvalidArgument, "Or filter needs at least one child");
  return {Kind::Or, {}, {}, std::move(children)};
}
QueryFilter QueryFilter::negate(QueryFilter child) {
  QueryFilter f{Kind::Not, {}, {}, {}};
  f.children.push_back(std::move(child));
  return f;
}

bool QueryFilter::matches(const DirectoryEntry& entry) const {
  switch (kind) {
    case Kind::True:
      return true;
    case Kind::Equality: {
      const auto* vals = entry.values(attribute);
      return vals != nullptr && std::find(vals->begin(), vals->end(), value) != vals->end();
    }
    case Kind::Presence:
      if (iequals(attribute, "objectClass")) return !entry.object_classes.empty();
      return entry.values(attribute) != nullptr;
    case Kind::ObjectClassIs:
      return entry.has_class(value);
    case Kind::GreaterEq:
      return any_numeric(entry, attribute, value, [](long long a, long long b) { return a >= b; });
    case Kind::LessEq:
      return any_numeric(entry, attribute, value, [](long long a, long long b) { return a <= b; });
    case Kind::And:
      return std::all_of(children.begin(), children.end(), [&](const auto& c) { return c.matches(entry); });
    case Kind::Or:
      return std::any_of(children.begin(), children.end(), [&](const auto& c) { return c.matches(entry); });
    case Kind::Not:
      return !children.front().matches(entry);
  }
  return false;
}

std::string QueryFilter::to_string() const {
  switch (kind) {
    case Kind::True: return "(objectClass=*)";
    case Kind::Equality: return "(" + attribute + "=" + escape(value) + ")";
    case Kind::Presence: return "(" + attribute + "=*)";
    case Kind::ObjectClassIs: return "(objectClass=" + escape(value) + ")";
    case Kind::GreaterEq: return "(" + attribute + ">=" + escape(value) + ")";
    case Kind::LessEq: return "(" + attribute + "<=" + escape(value) + ")";
    case Kind::And:
    case Kind::Or: {
      std::string out = kind == Kind::And ? "(&" : "(|";
      for (const auto& c : children) out += c.to_string();
      return out + ")";
    }
    case Kind::Not: return "(!" + children.front().to_string() + ")";
  }
  return {};
}

QueryFilter QueryFilter::parse(std::string_view text) { return FilterParser(text).parse_all(); }

}  // namespace worldgrid::infosys
