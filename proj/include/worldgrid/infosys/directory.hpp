// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "worldgrid/infosys/entry.hpp"
#include "worldgrid/infosys/filter.hpp"
#include "worldgrid/infosys/schema.hpp"

namespace worldgrid::infosys {

enum class Scope { Base, Subtree };

inline constexpr SimTime kDefaultRefreshPeriod = 30;

// A feed of directory entries: a fixed set of records (an ldif file) or an
// information provider invoked on every refresh.
struct InfoSource {
  using Provider = std::function<std::vector<DirectoryEntry>()>;

  std::string id;
  std::variant<std::vector<DirectoryEntry>, Provider> content;
  SimTime refresh_period = kDefaultRefreshPeriod;

  static InfoSource fixed(std::string id, std::vector<DirectoryEntry> entries);
  static InfoSource provider(std::string id, Provider fn, SimTime refresh_period = kDefaultRefreshPeriod);

  // Entries stamped with this source's id.
  std::vector<DirectoryEntry> produce() const;
};

struct Rejection {
  DirectoryEntry entry;
  std::string reason;
};

struct IngestReport {
  std::size_t accepted = 0;
  std::vector<Rejection> rejected;
};

// Immutable snapshot of directory entries keyed by DN. Copies share the
// underlying storage, so handing a Directory to another thread is cheap and
// safe.
class Directory {
 public:
  Directory();

  // Builds a directory from entries; same-DN collisions keep the entry with
  // the latest published_at, ties going to the smaller source id.
  static Directory from_entries(std::vector<DirectoryEntry> entries);
  // Union of several snapshots under the same collision rule.
  static Directory merge(std::span<const Directory> parts);

  std::vector<DirectoryEntry> search(const DistinguishedName& base, Scope scope,
                                     const QueryFilter& filter) const;
  // Whole-directory filter scan, ignoring the namespace.
  std::vector<DirectoryEntry> search(const QueryFilter& filter) const;

  const DirectoryEntry* find(const DistinguishedName& dn) const;
  std::size_t size() const noexcept { return entries_->size(); }
  bool empty() const noexcept { return entries_->empty(); }

  // All entries in DN order.
  std::vector<DirectoryEntry> entries() const;

  // Canonical ldif rendering, byte-stable for identical content.
  std::string serialize() const;

  // True when `a` should replace `b` under the collision rule.
  static bool supersedes(const DirectoryEntry& a, const DirectoryEntry& b) noexcept;

 private:
  using Map = std::map<std::string, DirectoryEntry>;
  explicit Directory(std::shared_ptr<const Map> entries) : entries_(std::move(entries)) {}

  std::shared_ptr<const Map> entries_;
};

struct LoadOutcome {
  Directory directory;
  IngestReport report;
};

// Ingests every source; all of them contribute. Invalid entries are listed
// in the report and never abort the batch. Throws DuplicateSourceId.
LoadOutcome load_sources(std::span<const InfoSource> sources, const Schema& schema);

}  // namespace worldgrid::infosys
