// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/infosys/schema.hpp"

#include <algorithm>
#include <charconv>

#include "worldgrid/common/error.hpp"

namespace worldgrid::infosys {

namespace {

bool is_integer(std::string_view s) {
  long long v = 0;
  const auto* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, v);
  return !s.empty() && res.ec == std::errc{} && res.ptr == end;
}

bool is_boolean(std::string_view s) { return iequals(s, "true") || iequals(s, "false"); }

}  // namespace

void Schema::add_attribute(std::string name, AttrType type) {
  const auto [it, inserted] = attribute_types_.emplace(std::move(name), type);
  if (!inserted && it->second != type)
    throw Error(ErrorCode::InvalidArgument, "attribute '" + it->first + "' redeclared with another type");
}

void Schema::add_class(std::string name, std::vector<std::string> required,
                       std::vector<std::string> optional) {
  ObjectClassDef def;
  for (auto& attr : required) {
    if (!attribute_types_.contains(attr))
      throw Error(ErrorCode::InvalidArgument, "class " + name + " requires undeclared attribute " + attr);
    def.required.insert(std::move(attr));
  }
  for (auto& attr : optional) {
    if (!attribute_types_.contains(attr))
      throw Error(ErrorCode::InvalidArgument, "class " + name + " allows undeclared attribute " + attr);
    if (def.required.contains(attr))
      throw Error(ErrorCode::InvalidArgument, "class " + name + " lists " + attr + " as required and optional");
    def.optional.insert(std::move(attr));
  }
  classes_[std::move(name)] = std::move(def);
}

void Schema::merge(const Schema& other) {
  for (const auto& [name, type] : other.attribute_types_) add_attribute(name, type);
  for (const auto& [name, def] : other.classes_) classes_[name] = def;
}

std::optional<AttrType> Schema::type_of(std::string_view attribute) const {
  const auto it = attribute_types_.find(attribute);
  if (it == attribute_types_.end()) return std::nullopt;
  return it->second;
}

const ObjectClassDef* Schema::find_class(std::string_view name) const {
  const auto it = classes_.find(name);
  return it == classes_.end() ? nullptr : &it->second;
}

std::optional<std::string> Schema::validate(const DirectoryEntry& entry) const {
  if (entry.object_classes.empty()) return "entry has no objectClass";
  for (const auto& cls : entry.object_classes) {
    const auto* def = find_class(cls);
    if (def == nullptr) return "unknown objectClass " + cls;
    for (const auto& req : def->required) {
      const auto* vals = entry.values(req);
      if (vals == nullptr || vals->empty()) return "missing required attribute " + req + " of " + cls;
    }
  }
  for (const auto& [name, vals] : entry.attributes) {
    const auto type = type_of(name);
    if (!type) return "undeclared attribute " + name;
    bool allowed = false;
    for (const auto& cls : entry.object_classes) {
      const auto* def = find_class(cls);
      if (def->required.contains(name) || def->optional.contains(name)) {
        allowed = true;
        break;
      }
    }
    if (!allowed) return "attribute " + name + " not allowed by the entry's object classes";
    if (*type != AttrType::StringList && vals.size() > 1) return "attribute " + name + " is single-valued";
    for (const auto& v : vals) {
      if (*type == AttrType::Integer && !is_integer(v)) return "attribute " + name + " expects an integer, got '" + v + "'";
      if (*type == AttrType::Boolean && !is_boolean(v)) return "attribute " + name + " expects a boolean, got '" + v + "'";
    }
  }
  const auto& leaf = entry.dn.leaf();
  const auto* leaf_vals = entry.values(leaf.attribute());
  if (leaf_vals == nullptr || std::find(leaf_vals->begin(), leaf_vals->end(), leaf.value()) == leaf_vals->end())
    return "leaf RDN " + leaf.to_string() + " not present among attributes";
  return std::nullopt;
}

Schema globus_schema() {
  Schema s;
  s.add_attribute("Mds-Hostname", AttrType::String);
  s.add_attribute("Mds-Os-Name", AttrType::String);
  s.add_attribute("Mds-Cpu-Total-Count", AttrType::Integer);
  s.add_class(std::string(classes::kGlobusHost), {"Mds-Hostname"}, {"Mds-Os-Name", "Mds-Cpu-Total-Count"});
  return s;
}

namespace {

void add_resource_attributes(Schema& s) {
  s.add_attribute("CEId", AttrType::String);
  s.add_attribute("LRMSType", AttrType::String);
  s.add_attribute("TotalCPUs", AttrType::Integer);
  s.add_attribute("FreeCPUs", AttrType::Integer);
  s.add_attribute("RunningJobs", AttrType::Integer);
  s.add_attribute("WaitingJobs", AttrType::Integer);
  s.add_attribute("RunTimeEnvironment", AttrType::StringList);
  s.add_attribute("AuthorizedVOs", AttrType::StringList);
  s.add_attribute("CloseSEs", AttrType::StringList);
  s.add_attribute("SEId", AttrType::String);
  s.add_attribute("TotalBytes", AttrType::Integer);
  s.add_attribute("UsedBytes", AttrType::Integer);
  s.add_attribute("Protocols", AttrType::StringList);
  s.add_attribute("SiteName", AttrType::String);
  s.add_attribute("HostName", AttrType::String);
}

const std::vector<std::string> kCeRequired = {"CEId", "LRMSType", "TotalCPUs", "FreeCPUs",
                                              "RunningJobs", "WaitingJobs", "AuthorizedVOs"};
const std::vector<std::string> kCeOptional = {"RunTimeEnvironment", "CloseSEs", "SiteName", "HostName"};
const std::vector<std::string> kSeRequired = {"SEId", "TotalBytes", "UsedBytes"};
const std::vector<std::string> kSeOptional = {"Protocols", "SiteName", "HostName"};

}  // namespace

Schema edg_schema() {
  Schema s;
  add_resource_attributes(s);
  s.add_class(std::string(classes::kEdgCe), kCeRequired, kCeOptional);
  s.add_class(std::string(classes::kEdgSe), kSeRequired, kSeOptional);
  return s;
}

Schema glue_schema() {
  Schema s;
  add_resource_attributes(s);
  s.add_attribute("GlueCEUniqueID", AttrType::String);
  s.add_attribute("GlueSEUniqueID", AttrType::String);
  auto ce_required = kCeRequired;
  ce_required.push_back("GlueCEUniqueID");
  auto se_required = kSeRequired;
  se_required.push_back("GlueSEUniqueID");
  s.add_class(std::string(classes::kGlueCe), ce_required, kCeOptional);
  s.add_class(std::string(classes::kGlueSe), se_required, kSeOptional);
  return s;
}

Schema worldgrid_schema() {
  Schema s = globus_schema();
  s.merge(edg_schema());
  s.merge(glue_schema());
  return s;
}

}  // namespace worldgrid::infosys
