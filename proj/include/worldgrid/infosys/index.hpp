// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "worldgrid/infosys/directory.hpp"

namespace worldgrid::infosys {

enum class IndexLevel { Gris, SiteGiis, TopGiis };

std::string_view to_string(IndexLevel level) noexcept;

inline constexpr SimTime kDefaultRegistrationTtl = 60;

struct Registration {
  SimTime last_seen = 0;
  SimTime ttl = kDefaultRegistrationTtl;

  bool fresh_at(SimTime now) const noexcept { return last_seen + ttl >= now; }
};

struct IndexNode {
  std::string id;
  IndexLevel level = IndexLevel::Gris;
  std::map<std::string, Registration> registrants;
  std::optional<std::string> backup_of;
  Directory local;  // what this node publishes itself (GRIS content)
};

// GRIS / site GIIS / top GIIS hierarchy. A node's view is its own content
// plus the views of every registrant whose registration has not lapsed.
class InformationService {
 public:
  using Reachability = std::function<bool(std::string_view node)>;

  void add_node(std::string id, IndexLevel level, std::optional<std::string> backup_of = std::nullopt);
  bool has_node(std::string_view id) const;
  const IndexNode& node(std::string_view id) const;
  std::vector<std::string> node_ids() const;

  void publish(std::string_view node, Directory content);

  // Adds or refreshes a registration. Throws UnknownNode, CycleDetected.
  void register_child(std::string_view node, std::string_view child, SimTime ttl, SimTime now);

  bool registration_fresh(std::string_view node, std::string_view child, SimTime now) const;

  Directory view(std::string_view node, SimTime now) const;
  std::vector<DirectoryEntry> search(std::string_view node, SimTime now, const DistinguishedName& base,
                                     Scope scope, const QueryFilter& filter) const;

  // Failure injection hook; every node is reachable when unset.
  void set_reachability(Reachability fn) { reachable_ = std::move(fn); }
  bool reachable(std::string_view node) const;

  // Primary if reachable, else backup, else AllIndexesDown.
  std::string effective_top(std::string_view primary, std::string_view backup) const;

 private:
  IndexNode& mutable_node(std::string_view id);
  bool reaches(std::string_view from, std::string_view target) const;

  std::map<std::string, IndexNode, std::less<>> nodes_;
  Reachability reachable_;
};

}  // namespace worldgrid::infosys
