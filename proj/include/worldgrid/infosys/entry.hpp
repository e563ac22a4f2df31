// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "worldgrid/common/types.hpp"
#include "worldgrid/infosys/dn.hpp"

namespace worldgrid::infosys {

// Attribute names compare case-insensitively, as in LDAP.
using AttributeMap = std::map<std::string, std::vector<std::string>, CaseInsensitiveLess>;
using ObjectClassSet = std::set<std::string, CaseInsensitiveLess>;

struct DirectoryEntry {
  DistinguishedName dn;
  ObjectClassSet object_classes;
  AttributeMap attributes;
  std::string source_id;
  SimTime published_at = 0;

  bool has_class(std::string_view name) const { return object_classes.contains(name); }

  // First value of an attribute, if any.
  std::optional<std::string> first(std::string_view name) const;
  const std::vector<std::string>* values(std::string_view name) const;

  bool operator==(const DirectoryEntry&) const = default;
};

}  // namespace worldgrid::infosys
