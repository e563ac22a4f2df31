// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "worldgrid/infosys/entry.hpp"

namespace worldgrid::infosys {

enum class AttrType { String, Integer, Boolean, StringList };

struct ObjectClassDef {
  ObjectClassSet required;
  ObjectClassSet optional;
};

// Object-class and attribute-type definitions. Entries that do not conform
// are rejected at ingestion time with a reason string.
class Schema {
 public:
  void add_attribute(std::string name, AttrType type);
  // Every attribute mentioned must already be declared; required and
  // optional sets must be disjoint.
  void add_class(std::string name, std::vector<std::string> required,
                 std::vector<std::string> optional = {});

  // Union of both schemas. Conflicting attribute types are an error.
  void merge(const Schema& other);

  std::optional<AttrType> type_of(std::string_view attribute) const;
  const ObjectClassDef* find_class(std::string_view name) const;

  // std::nullopt when valid, else the first violation found.
  std::optional<std::string> validate(const DirectoryEntry& entry) const;

 private:
  std::map<std::string, AttrType, CaseInsensitiveLess> attribute_types_;
  std::map<std::string, ObjectClassDef, CaseInsensitiveLess> classes_;
};

// Object class names used by the shipped schemas.
namespace classes {
inline constexpr std::string_view kGlobusHost = "MdsHost";
inline constexpr std::string_view kEdgCe = "EdgCE";
inline constexpr std::string_view kEdgSe = "EdgSE";
inline constexpr std::string_view kGlueCe = "GlueCE";
inline constexpr std::string_view kGlueSe = "GlueSE";
}  // namespace classes

// Stock Globus MDS host description.
Schema globus_schema();
// EDG resource schema: EdgCE / EdgSE.
Schema edg_schema();
// GLUE resource schema: GlueCE / GlueSE, same attribute subset plus unique ids.
Schema glue_schema();
// All three together; what a WorldGrid site's directory validates against.
Schema worldgrid_schema();

}  // namespace worldgrid::infosys
