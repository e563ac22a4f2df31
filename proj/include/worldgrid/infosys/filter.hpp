// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "worldgrid/infosys/entry.hpp"

namespace worldgrid::infosys {

// Prefix search filter, e.g. `(&(objectClass=GlueCE)(FreeCPUs>=1))`.
struct QueryFilter {
  enum class Kind { Equality, Presence, ObjectClassIs, GreaterEq, LessEq, And, Or, Not, True };

  Kind kind = Kind::True;
  std::string attribute;
  std::string value;
  std::vector<QueryFilter> children;

  static QueryFilter always();
  static QueryFilter equality(std::string attribute, std::string value);
  static QueryFilter presence(std::string attribute);
  static QueryFilter object_class(std::string name);
  static QueryFilter greater_eq(std::string attribute, std::string value);
  static QueryFilter less_eq(std::string attribute, std::string value);
  static QueryFilter all_of(std::vector<QueryFilter> children);
  static QueryFilter any_of(std::vector<QueryFilter> children);
  static QueryFilter negate(QueryFilter child);

  bool matches(const DirectoryEntry& entry) const;

  // Canonical textual form; parse(to_string()) reproduces the filter.
  std::string to_string() const;

  // Throws Error(FilterSyntax) with the offending offset.
  static QueryFilter parse(std::string_view text);

  bool operator==(const QueryFilter&) const = default;
};

}  // namespace worldgrid::infosys
