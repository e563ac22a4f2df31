// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/infosys/directory.hpp"

#include <set>

#include "worldgrid/common/error.hpp"
#include "worldgrid/infosys/ldif.hpp"

namespace worldgrid::infosys {

InfoSource InfoSource::fixed(std::string id, std::vector<DirectoryEntry> entries) {
  return InfoSource{std::move(id), std::move(entries), kDefaultRefreshPeriod};
}

InfoSource InfoSource::provider(std::string id, Provider fn, SimTime refresh_period) {
  return InfoSource{std::move(id), std::move(fn), refresh_period};
}

std::vector<DirectoryEntry> InfoSource::produce() const {
  std::vector<DirectoryEntry> out;
  if (const auto* fixed_entries = std::get_if<std::vector<DirectoryEntry>>(&content)) {
    out = *fixed_entries;
  } else {
    const auto& fn = std::get<Provider>(content);
    if (fn) out = fn();
  }
  for (auto& e : out) e.source_id = id;
  return out;
}

Directory::Directory() : entries_(std::make_shared<const Map>()) {}

bool Directory::supersedes(const DirectoryEntry& a, const DirectoryEntry& b) noexcept {
  if (a.published_at != b.published_at) return a.published_at > b.published_at;
  return a.source_id < b.source_id;
}

Directory Directory::from_entries(std::vector<DirectoryEntry> entries) {
  auto map = std::make_shared<Map>();
  for (auto& e : entries) {
    auto key = e.dn.to_string();
    const auto it = map->find(key);
    if (it == map->end()) {
      map->emplace(std::move(key), std::move(e));
    } else if (supersedes(e, it->second)) {
      it->second = std::move(e);
    }
  }
  return Directory(std::move(map));
}

Directory Directory::merge(std::span<const Directory> parts) {
  if (parts.size() == 1) return parts.front();
  std::vector<DirectoryEntry> all;
  for (const auto& part : parts)
    for (const auto& [key, e] : *part.entries_) all.push_back(e);
  return from_entries(std::move(all));
}

std::vector<DirectoryEntry> Directory::search(const DistinguishedName& base, Scope scope,
                                              const QueryFilter& filter) const {
  std::vector<DirectoryEntry> out;
  for (const auto& [key, e] : *entries_) {
    const bool in_scope = scope == Scope::Base ? e.dn == base : e.dn.is_within(base);
    if (in_scope && filter.matches(e)) out.push_back(e);
  }
  return out;
}

std::vector<DirectoryEntry> Directory::search(const QueryFilter& filter) const {
  std::vector<DirectoryEntry> out;
  for (const auto& [key, e] : *entries_)
    if (filter.matches(e)) out.push_back(e);
  return out;
}

const DirectoryEntry* Directory::find(const DistinguishedName& dn) const {
  const auto it = entries_->find(dn.to_string());
  return it == entries_->end() ? nullptr : &it->second;
}

std::vector<DirectoryEntry> Directory::entries() const {
  std::vector<DirectoryEntry> out;
  out.reserve(entries_->size());
  for (const auto& [key, e] : *entries_) out.push_back(e);
  return out;
}

std::string Directory::serialize() const {
  const auto all = entries();
  return write_ldif(all);
}

LoadOutcome load_sources(std::span<const InfoSource> sources, const Schema& schema) {
  std::set<std::string> ids;
  for (const auto& s : sources)
    if (!ids.insert(s.id).second) throw Error(ErrorCode::DuplicateSourceId, "duplicate info source id " + s.id);

  LoadOutcome outcome;
  std::vector<DirectoryEntry> valid;
  for (const auto& s : sources) {
    for (auto& e : s.produce()) {
      if (auto reason = schema.validate(e)) {
        outcome.report.rejected.push_back({std::move(e), std::move(*reason)});
      } else {
        ++outcome.report.accepted;
        valid.push_back(std::move(e));
      }
    }
  }
  outcome.directory = Directory::from_entries(std::move(valid));
  return outcome;
}

}  // namespace worldgrid::infosys
