// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/infosys/index.hpp"

#include "worldgrid/common/error.hpp"

namespace worldgrid::infosys {

std::string_view to_string(IndexLevel level) noexcept {
  switch (level) {
    case IndexLevel::Gris: return "GRIS";
    case IndexLevel::SiteGiis: return "SiteGIIS";
    case IndexLevel::TopGiis: return "TopGIIS";
  }
  return "?";
}

void InformationService::add_node(std::string id, IndexLevel level, std::optional<std::string> backup_of) {
  if (nodes_.contains(id)) throw Error(ErrorCode::InvalidArgument, "index node " + id + " already exists");
  IndexNode n;
  n.id = id;
  n.level = level;
  n.backup_of = std::move(backup_of);
  nodes_.emplace(std::move(id), std::move(n));
}

bool InformationService::has_node(std::string_view id) const { return nodes_.find(id) != nodes_.end(); }

const IndexNode& InformationService::node(std::string_view id) const {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, "unknown index node " + std::string(id));
  return it->second;
}

IndexNode& InformationService::mutable_node(std::string_view id) {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw Error(ErrorCode::UnknownNode, "unknown index node " + std::string(id));
  return it->second;
}

std::vector<std::string> InformationService::node_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, n] : nodes_) out.push_back(id);
  return out;
}

void InformationService::publish(std::string_view node, Directory content) {
  mutable_node(node).local = std::move(content);
}

bool InformationService::reaches(std::string_view from, std::string_view target) const {
  if (from == target) return true;
  for (const auto& [child, reg] : node(from).registrants)
    if (reaches(child, target)) return true;
  return false;
}

void InformationService::register_child(std::string_view node_id, std::string_view child, SimTime ttl,
                                        SimTime now) {
  auto& parent = mutable_node(node_id);
  (void)node(child);
  if (reaches(child, node_id))
    throw Error(ErrorCode::CycleDetected,
                "registering " + std::string(child) + " under " + std::string(node_id) + " would form a cycle");
  if (ttl <= 0) throw Error(ErrorCode::InvalidArgument, "registration ttl must be positive");
  parent.registrants[std::string(child)] = Registration{now, ttl};
}

bool InformationService::registration_fresh(std::string_view node_id, std::string_view child, SimTime now) const {
  const auto& regs = node(node_id).registrants;
  const auto it = regs.find(std::string(child));
  return it != regs.end() && it->second.fresh_at(now);
}

Directory InformationService::view(std::string_view node_id, SimTime now) const {
  const auto& n = node(node_id);
  if (n.registrants.empty()) return n.local;
  std::vector<Directory> parts{n.local};
  for (const auto& [child, reg] : n.registrants)
    if (reg.fresh_at(now)) parts.push_back(view(child, now));
  return Directory::merge(parts);
}

std::vector<DirectoryEntry> InformationService::search(std::string_view node_id, SimTime now,
                                                       const DistinguishedName& base, Scope scope,
                                                       const QueryFilter& filter) const {
  return view(node_id, now).search(base, scope, filter);
}

bool InformationService::reachable(std::string_view node_id) const {
  (void)node(node_id);
  return !reachable_ || reachable_(node_id);
}

std::string InformationService::effective_top(std::string_view primary, std::string_view backup) const {
  for (const auto id : {primary, backup}) {
    if (node(id).level != IndexLevel::TopGiis)
      throw Error(ErrorCode::InvalidArgument, std::string(id) + " is not a top-level index");
  }
  if (reachable(primary)) return std::string(primary);
  if (reachable(backup)) return std::string(backup);
  throw Error(ErrorCode::AllIndexesDown,
              "both " + std::string(primary) + " and " + std::string(backup) + " are unreachable");
}

}  // namespace worldgrid::infosys
