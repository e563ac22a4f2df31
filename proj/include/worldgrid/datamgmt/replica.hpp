// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "worldgrid/fabric/fabric.hpp"

namespace worldgrid::datamgmt {

// `lfn:/<vo>/<path>`
struct LogicalFileName {
  std::string vo;
  std::string path;

  static LogicalFileName parse(std::string_view text);  // InvalidArgument
  std::string to_string() const;
  auto operator<=>(const LogicalFileName&) const = default;
};

struct PhysicalFileName {
  std::string protocol = "gridftp";
  std::string se;
  std::string path;
  std::int64_t size = 0;

  // `<protocol>://<se><path>`
  std::string to_string() const;
  auto operator<=>(const PhysicalFileName&) const = default;
};

// Where an LFN's replica lives on a given SE.
std::string physical_path(const LogicalFileName& lfn);

class ReplicaCatalog {
 public:
  explicit ReplicaCatalog(std::string id = "rc") : id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

  // Throws SizeMismatch when the lfn already has replicas of another size.
  void add(const LogicalFileName& lfn, PhysicalFileName pfn);
  // Throws UnknownPair. The lfn disappears with its last replica.
  void remove(const LogicalFileName& lfn, const PhysicalFileName& pfn);
  std::set<PhysicalFileName> list(const LogicalFileName& lfn) const;
  bool contains(const LogicalFileName& lfn) const { return entries_.contains(lfn); }
  std::vector<LogicalFileName> lfns() const;
  std::size_t size() const noexcept { return entries_.size(); }

  // Sorted `lfn pfn size` lines.
  std::string dump() const;

 private:
  std::string id_;
  std::map<LogicalFileName, std::set<PhysicalFileName>> entries_;
};

struct Transfer {
  PhysicalFileName pfn;
  SimTime duration = 0;  // simulated seconds on the link
  bool copied = false;   // false when the destination already held it
};

// Point-to-point copies between fabric locations and SEs, kept in step with
// one catalogue.
class ReplicaManager {
 public:
  ReplicaManager(fabric::Fabric& fabric, ReplicaCatalog& catalog) : fabric_(fabric), catalog_(catalog) {}

  // Source is a fabric location ("ui:<id>", "wn:<site>", "ce:<ce id>",
  // "se:<host>"). Transfers out of a worker node need outbound
  // connectivity at its site. Throws UnknownSe, SourceMissing,
  // ConnectivityDenied, SizeMismatch, NoSpace.
  Transfer copy_and_register(const std::string& source, const std::string& path, const std::string& dest_se,
                             const LogicalFileName& lfn);

  // Copies from the closest reachable replica: same site, then same
  // continent, then smallest SE id. Throws UnknownLfn, UnknownSe, NoSpace,
  // ConnectivityDenied (gridftp down at the destination or at every source).
  Transfer replicate(const LogicalFileName& lfn, const std::string& dest_se);

  std::set<PhysicalFileName> list_replicas(const LogicalFileName& lfn) const { return catalog_.list(lfn); }

  // Catalogue entry only; the file stays on the SE.
  void unregister(const LogicalFileName& lfn, const PhysicalFileName& pfn) { catalog_.remove(lfn, pfn); }

  // Job-side directory creation on a worker node, which needs the site's
  // inbound ports. Throws ConnectivityDenied, UnknownSite.
  void make_directory(const std::string& site, const std::string& path);

  // True if any lfn has a replica on one of the given SEs.
  bool any_replica_on(std::span<const std::string> lfns, std::span<const std::string> ses) const;

  // First registered pfn whose file is missing from its SE, if any.
  std::optional<std::string> consistency_violation() const;

 private:
  PhysicalFileName store(const std::string& dest_se, const LogicalFileName& lfn, std::int64_t size);

  fabric::Fabric& fabric_;
  ReplicaCatalog& catalog_;
};

}  // namespace worldgrid::datamgmt
