// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "worldgrid/fabric/scenario.hpp"
#include "worldgrid/infosys/filter.hpp"
#include "worldgrid/jdl/document.hpp"

namespace worldgrid::wms {

struct BrokerConfig {
  std::string id;
  std::string info_primary;
  std::string info_backup;
  std::string replica_catalog;
  bool glue_aware = false;
  bool strict_data = false;  // drop candidates without close replicas
  jdl::ExprPtr default_rank;

  static BrokerConfig from_spec(const fabric::BrokerSpec& spec);
};

struct Candidate {
  std::string ce;
  std::optional<double> rank;  // empty when the rank expression is Undefined
  bool data_close = false;

  bool operator==(const Candidate&) const = default;
};

struct MatchResult {
  std::vector<Candidate> ranked;
  const Candidate& chosen() const { return ranked.front(); }
};

struct MatchRequest {
  const jdl::JdlDocument* jdl = nullptr;
  std::string owner;
  std::string vo;
  std::set<std::string> exclude;  // CEs already tried
};

// Whether the owner may use the CE described by this entry (authentication
// plus grid-mapfile lookup at its site).
using AccessCheck = std::function<bool(const infosys::DirectoryEntry& ce)>;
// Whether any of the LFNs has a replica on one of the SEs.
using ReplicaCheck = std::function<bool(std::span<const std::string> lfns, std::span<const std::string> ses)>;

// CE entries of the schema this broker reads.
infosys::QueryFilter candidate_filter(bool glue_aware);

// Typed view of an entry for `other.` references: integers, booleans and
// lists per the resource schema, plain strings otherwise.
jdl::ValueMap resource_values(const infosys::DirectoryEntry& entry);

// data_close first, then higher rank, Undefined rank last, then CE id.
bool ranks_before(const Candidate& a, const Candidate& b);

// Filters by VO, access and requirements, scores the survivors and orders
// them. Throws NoMatchingResources when nothing is left.
MatchResult rank_candidates(const BrokerConfig& config, const MatchRequest& request,
                            std::span<const infosys::DirectoryEntry> entries, const AccessCheck& access,
                            const ReplicaCheck& replicas);

}  // namespace worldgrid::wms
