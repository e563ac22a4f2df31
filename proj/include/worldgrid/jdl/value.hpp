// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "worldgrid/common/types.hpp"

namespace worldgrid::jdl {

struct Undefined {
  bool operator==(const Undefined&) const = default;
};

// Result of evaluating an expression. Every failure folds to Undefined.
class Value {
 public:
  using List = std::vector<Value>;
  using Storage = std::variant<Undefined, bool, std::int64_t, double, std::string, List>;

  Value() = default;
  Value(Undefined) {}
  Value(bool b) : data_(b) {}
  Value(std::int64_t i) : data_(i) {}
  Value(int i) : data_(static_cast<std::int64_t>(i)) {}
  Value(double d) : data_(d) {}
  Value(std::string s) : data_(std::move(s)) {}
  Value(const char* s) : data_(std::string(s)) {}
  Value(List l) : data_(std::move(l)) {}

  static Value string_list(const std::vector<std::string>& items);

  bool is_undefined() const noexcept { return std::holds_alternative<Undefined>(data_); }
  bool is_bool() const noexcept { return std::holds_alternative<bool>(data_); }
  bool is_int() const noexcept { return std::holds_alternative<std::int64_t>(data_); }
  bool is_double() const noexcept { return std::holds_alternative<double>(data_); }
  bool is_number() const noexcept { return is_int() || is_double(); }
  bool is_string() const noexcept { return std::holds_alternative<std::string>(data_); }
  bool is_list() const noexcept { return std::holds_alternative<List>(data_); }

  bool as_bool() const { return std::get<bool>(data_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(data_); }
  double as_double() const { return std::get<double>(data_); }
  double as_number() const { return is_int() ? static_cast<double>(as_int()) : as_double(); }
  const std::string& as_string() const { return std::get<std::string>(data_); }
  const List& as_list() const { return std::get<List>(data_); }

  bool is_true() const noexcept { return is_bool() && as_bool(); }
  bool is_false() const noexcept { return is_bool() && !as_bool(); }

  const Storage& storage() const noexcept { return data_; }

  // Rendering in expression syntax.
  std::string to_string() const;

  // Structural identity (int 1 and double 1.0 differ).
  bool operator==(const Value&) const = default;

 private:
  Storage data_;
};

using ValueMap = std::map<std::string, Value, CaseInsensitiveLess>;

}  // namespace worldgrid::jdl
