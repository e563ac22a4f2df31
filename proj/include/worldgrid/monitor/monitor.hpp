// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "worldgrid/fabric/fabric.hpp"

namespace worldgrid::monitor {

enum class ProbeStatus { Up, Warn, Down };

std::string_view to_string(ProbeStatus s) noexcept;
ProbeStatus parse_probe_status(std::string_view text);
// green, yellow, red
std::string_view color_of(ProbeStatus s) noexcept;
ProbeStatus worst(ProbeStatus a, ProbeStatus b) noexcept;

struct ProbeTarget {
  std::string target;  // site id or central service id
  fabric::ServiceKind kind = fabric::ServiceKind::Gatekeeper;

  auto operator<=>(const ProbeTarget&) const = default;
};

struct Probe {
  ProbeTarget target;
  SimTime period = 30;
  SimTime timeout = 5;
  SimTime next_due = 0;
};

struct ProbeResult {
  SimTime t = 0;
  ProbeTarget target;
  ProbeStatus status = ProbeStatus::Up;
  std::int64_t latency_ms = 0;
  std::string detail;

  bool operator==(const ProbeResult&) const = default;
};

// Fixed-capacity history; the oldest result drops out first.
class HistoryRing {
 public:
  explicit HistoryRing(std::size_t capacity);
  void push(ProbeResult r);
  std::size_t size() const noexcept { return items_.size(); }
  std::size_t capacity() const noexcept { return capacity_; }
  const std::deque<ProbeResult>& items() const noexcept { return items_; }

 private:
  std::size_t capacity_;
  std::deque<ProbeResult> items_;
};

// What the probes observe. `down` is consulted first; `warning` yields the
// reason for a WARN (stale CRL, lapsed registration) or nothing.
struct ProbeOracle {
  std::function<bool(const ProbeTarget&, SimTime)> down;
  std::function<std::optional<std::string>(const ProbeTarget&, SimTime)> warning;
};

struct HostMetrics {
  double load = 0;
  double memory = 0;
  double swap = 0;
  double disk = 0;
  double network = 0;

  bool operator==(const HostMetrics&) const = default;
};

struct ServiceStatus {
  std::string service;
  ProbeStatus status = ProbeStatus::Up;
  std::int64_t latency_ms = 0;
  std::string detail;
  SimTime checked_at = 0;

  bool operator==(const ServiceStatus&) const = default;
};

struct SiteStatus {
  std::string id;
  std::string country;
  double lat = 0;
  double lon = 0;
  std::vector<ServiceStatus> services;
  ProbeStatus rollup = ProbeStatus::Up;
  HostMetrics metrics;

  bool operator==(const SiteStatus&) const = default;
};

struct MapSnapshot {
  SimTime t = 0;
  std::string filter = "none";  // "none", "vo=<name>", "country=<code>", "site=<id>"
  std::vector<SiteStatus> sites;
  std::vector<SiteStatus> central;  // brokers, indexes, catalogues

  bool operator==(const MapSnapshot&) const = default;
};

struct MapFilter {
  enum class Kind { None, Vo, Country, Site };
  Kind kind = Kind::None;
  std::string value;

  // "none", "vo=x", "country=x" or "site=x". Throws InvalidArgument.
  static MapFilter parse(std::string_view text);
  std::string to_string() const;
};

inline constexpr std::size_t kDefaultHistoryCapacity = 1024;

// Operations-center monitoring over the fabric.
class Monitor {
 public:
  Monitor(const fabric::Fabric& fabric, ProbeOracle oracle, std::size_t history_capacity = kDefaultHistoryCapacity);

  // One probe per site service (gatekeeper, gris, gridftp where the site
  // has an SE) and per central service.
  void add_default_probes();
  void add_probe(Probe probe);
  const std::vector<Probe>& probes() const noexcept { return probes_; }

  // Runs every probe due at `now`.
  std::vector<ProbeResult> run_probes(SimTime now);
  // Evaluates a target without recording anything.
  ProbeResult observe(const ProbeTarget& target, SimTime now, SimTime timeout) const;

  const HistoryRing& history() const noexcept { return history_; }
  std::optional<ProbeResult> latest(const ProbeTarget& target) const;

  // Throws UnknownFilterValue.
  MapSnapshot aggregate(const MapFilter& filter, SimTime now) const;

 private:
  std::int64_t latency_ms(double lat, double lon) const;
  std::pair<double, double> coords_of(const std::string& target) const;
  HostMetrics metrics_for(const fabric::SiteSpec& site) const;
  ServiceStatus status_of(const ProbeTarget& target, SimTime now) const;

  const fabric::Fabric& fabric_;
  ProbeOracle oracle_;
  std::vector<Probe> probes_;
  HistoryRing history_;
  std::map<ProbeTarget, ProbeResult> latest_;
};

std::string export_map(const MapSnapshot& snapshot);
MapSnapshot parse_map(std::string_view text);  // InvalidArgument

// Great-circle distance in kilometres.
double distance_km(double lat1, double lon1, double lat2, double lon2);

}  // namespace worldgrid::monitor
