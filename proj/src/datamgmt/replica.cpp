// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/datamgmt/replica.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "worldgrid/common/error.hpp"

namespace worldgrid::datamgmt {

LogicalFileName LogicalFileName::parse(std::string_view text) {
  constexpr std::string_view prefix = "lfn:/";
  if (!text.starts_with(prefix)) throw Error(ErrorCode::InvalidArgument, "LFN must start with lfn:/");
  const auto rest = text.substr(prefix.size());
  const auto slash = rest.find('/');
  if (slash == std::string_view::npos || slash == 0 || slash + 1 >= rest.size())
    throw Error(ErrorCode::InvalidArgument, "LFN needs a VO and a path: " + std::string(text));
  const auto path = rest.substr(slash + 1);
  if (path.find_first_of(" \t\n") != std::string_view::npos)
    throw Error(ErrorCode::InvalidArgument, "LFN path must not contain whitespace");
  return {std::string(rest.substr(0, slash)), std::string(path)};
}

std::string LogicalFileName::to_string() const { return "lfn:/" + vo + "/" + path; }

std::string PhysicalFileName::to_string() const { return protocol + "://" + se + path; }

std::string physical_path(const LogicalFileName& lfn) { return "/grid/" + lfn.vo + "/" + lfn.path; }

void ReplicaCatalog::add(const LogicalFileName& lfn, PhysicalFileName pfn) {
  if (const auto it = entries_.find(lfn); it != entries_.end() && it->second.begin()->size != pfn.size)
    throw Error(ErrorCode::SizeMismatch,
                fmt::format("{} has {} byte replicas, not {}", lfn.to_string(), it->second.begin()->size, pfn.size));
  entries_[lfn].insert(std::move(pfn));
}

void ReplicaCatalog::remove(const LogicalFileName& lfn, const PhysicalFileName& pfn) {
  const auto it = entries_.find(lfn);
  if (it == entries_.end() || it->second.erase(pfn) == 0)
    throw Error(ErrorCode::UnknownPair, fmt::format("{} is not registered at {}", lfn.to_string(), pfn.to_string()));
  if (it->second.empty()) entries_.erase(it);
}

std::set<PhysicalFileName> ReplicaCatalog::list(const LogicalFileName& lfn) const {
  const auto it = entries_.find(lfn);
  return it == entries_.end() ? std::set<PhysicalFileName>{} : it->second;
}

std::vector<LogicalFileName> ReplicaCatalog::lfns() const {
  std::vector<LogicalFileName> out;
  for (const auto& [lfn, pfns] : entries_) out.push_back(lfn);
  return out;
}

std::string ReplicaCatalog::dump() const {
  std::vector<std::string> lines;
  for (const auto& [lfn, pfns] : entries_)
    for (const auto& p : pfns) lines.push_back(fmt::format("{} {} {}", lfn.to_string(), p.to_string(), p.size));
  std::sort(lines.begin(), lines.end());
  std::string out;
  for (const auto& l : lines) out += l + "\n";
  return out;
}

namespace {

std::optional<PhysicalFileName> replica_on(const std::set<PhysicalFileName>& pfns, std::string_view se) {
  for (const auto& p : pfns)
    if (p.se == se) return p;
  return std::nullopt;
}

}  // namespace

PhysicalFileName ReplicaManager::store(const std::string& dest_se, const LogicalFileName& lfn, std::int64_t size) {
  PhysicalFileName pfn{"gridftp", dest_se, physical_path(lfn), size};
  if (const auto existing = catalog_.list(lfn); !existing.empty() && existing.begin()->size != size)
    throw Error(ErrorCode::SizeMismatch, fmt::format("{} has {} byte replicas, not {}", lfn.to_string(),
                                                     existing.begin()->size, size));
  fabric_.files().put("se:" + dest_se, pfn.path, size);
  catalog_.add(lfn, pfn);
  return pfn;
}

Transfer ReplicaManager::copy_and_register(const std::string& source, const std::string& path,
                                           const std::string& dest_se, const LogicalFileName& lfn) {
  const auto& dest = fabric_.se(dest_se);
  const auto size = fabric_.files().size_of(source, path);
  if (!size) throw Error(ErrorCode::SourceMissing, fmt::format("{} has no file {}", source, path));
  if (source.starts_with("wn:")) {
    const auto site = source.substr(3);
    if (!fabric_.site(site).wn_outbound)
      throw Error(ErrorCode::ConnectivityDenied, "worker nodes at " + site + " have no outbound connectivity");
  }
  if (source.starts_with("se:") && !fabric_.service_up(fabric_.se(source.substr(3)).site, fabric::ServiceKind::GridFtp))
    throw Error(ErrorCode::ConnectivityDenied, "gridftp at the source SE is down");
  if (!fabric_.service_up(dest.site, fabric::ServiceKind::GridFtp))
    throw Error(ErrorCode::ConnectivityDenied, "gridftp at " + dest_se + " is down");
  if (auto existing = replica_on(catalog_.list(lfn), dest_se)) {
    if (existing->size != *size)
      throw Error(ErrorCode::SizeMismatch, fmt::format("{} has {} byte replicas, not {}", lfn.to_string(),
                                                       existing->size, *size));
    return Transfer{*existing, 0, false};
  }
  const auto duration = fabric_.transfer_time(*size, fabric_.endpoint_of(source), fabric_.endpoint_of("se:" + dest_se));
  return Transfer{store(dest_se, lfn, *size), duration, true};
}

Transfer ReplicaManager::replicate(const LogicalFileName& lfn, const std::string& dest_se) {
  const auto pfns = catalog_.list(lfn);
  if (pfns.empty()) throw Error(ErrorCode::UnknownLfn, "no replicas of " + lfn.to_string());
  const auto& dest = fabric_.se(dest_se);
  if (auto existing = replica_on(pfns, dest_se)) return Transfer{*existing, 0, false};
  if (!fabric_.service_up(dest.site, fabric::ServiceKind::GridFtp))
    throw Error(ErrorCode::ConnectivityDenied, "gridftp at " + dest_se + " is down");

  const auto& dest_site = fabric_.site(dest.site);
  const auto tier = [&](const PhysicalFileName& p) {
    const auto& src_site = fabric_.site(fabric_.se(p.se).site);
    if (src_site.id == dest_site.id) return 0;
    return src_site.continent == dest_site.continent ? 1 : 2;
  };
  // pfns iterate in SE order for a fixed lfn path, so the first best tier
  // is also the smallest SE id.
  const PhysicalFileName* best = nullptr;
  for (const auto& p : pfns) {
    if (!fabric_.service_up(fabric_.se(p.se).site, fabric::ServiceKind::GridFtp)) continue;
    if (!best || tier(p) < tier(*best) || (tier(p) == tier(*best) && p.se < best->se)) best = &p;
  }
  if (!best) throw Error(ErrorCode::ConnectivityDenied, "gridftp is down at every SE holding " + lfn.to_string());

  const auto src = "se:" + best->se;
  const auto duration = fabric_.transfer_time(best->size, fabric_.endpoint_of(src), fabric_.endpoint_of("se:" + dest_se));
  return Transfer{store(dest_se, lfn, best->size), duration, true};
}

void ReplicaManager::make_directory(const std::string& site, const std::string& path) {
  if (!fabric_.site(site).inbound_ports_open)
    throw Error(ErrorCode::ConnectivityDenied, "inbound ports at " + site + " are closed");
  fabric_.files().make_directory("wn:" + site, path);
}

bool ReplicaManager::any_replica_on(std::span<const std::string> lfns, std::span<const std::string> ses) const {
  for (const auto& text : lfns) {
    LogicalFileName lfn;
    try {
      lfn = LogicalFileName::parse(text);
    } catch (const Error&) {
      continue;
    }
    for (const auto& p : catalog_.list(lfn))
      if (std::find(ses.begin(), ses.end(), p.se) != ses.end()) return true;
  }
  return false;
}

std::optional<std::string> ReplicaManager::consistency_violation() const {
  for (const auto& lfn : catalog_.lfns())
    for (const auto& p : catalog_.list(lfn)) {
      if (!fabric_.has_se(p.se)) return fmt::format("{} points at unknown SE {}", lfn.to_string(), p.se);
      const auto held = fabric_.files().size_of("se:" + p.se, p.path);
      if (held != p.size) return fmt::format("{} is registered at {} but the SE does not hold it", lfn.to_string(), p.to_string());
    }
  return std::nullopt;
}

}  // namespace worldgrid::datamgmt
