// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/monitor/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include <nlohmann/json.hpp>

#include "worldgrid/common/error.hpp"

namespace worldgrid::monitor {

using fabric::ServiceKind;
using nlohmann::json;

std::string_view to_string(ProbeStatus s) noexcept {
  switch (s) {
    case ProbeStatus::Up: return "UP";
    case ProbeStatus::Warn: return "WARN";
    case ProbeStatus::Down: return "DOWN";
  }
  return "?";
}

ProbeStatus parse_probe_status(std::string_view text) {
  for (auto s : {ProbeStatus::Up, ProbeStatus::Warn, ProbeStatus::Down})
    if (text == to_string(s)) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown probe status '" + std::string(text) + "'");
}

std::string_view color_of(ProbeStatus s) noexcept {
  switch (s) {
    case ProbeStatus::Up: return "green";
    case ProbeStatus::Warn: return "yellow";
    case ProbeStatus::Down: return "red";
  }
  return "?";
}

ProbeStatus worst(ProbeStatus a, ProbeStatus b) noexcept { return static_cast<int>(a) >= static_cast<int>(b) ? a : b; }

HistoryRing::HistoryRing(std::size_t capacity) : capacity_(capacity) {
  if (capacity == 0) throw Error(ErrorCode::InvalidArgument, "history capacity must be positive");
}

void HistoryRing::push(ProbeResult r) {
  if (items_.size() == capacity_) items_.pop_front();
  items_.push_back(std::move(r));
}

MapFilter MapFilter::parse(std::string_view text) {
  if (text.empty() || text == "none") return {};
  const auto eq = text.find('=');
  if (eq == std::string_view::npos || eq + 1 == text.size())
    throw Error(ErrorCode::InvalidArgument, "filter must be none, vo=, country= or site=");
  const auto key = text.substr(0, eq);
  MapFilter f{Kind::None, std::string(text.substr(eq + 1))};
  if (key == "vo") f.kind = Kind::Vo;
  else if (key == "country") f.kind = Kind::Country;
  else if (key == "site") f.kind = Kind::Site;
  else throw Error(ErrorCode::InvalidArgument, "filter must be none, vo=, country= or site=");
  return f;
}

std::string MapFilter::to_string() const {
  switch (kind) {
    case Kind::None: return "none";
    case Kind::Vo: return "vo=" + value;
    case Kind::Country: return "country=" + value;
    case Kind::Site: return "site=" + value;
  }
  return "none";
}

double distance_km(double lat1, double lon1, double lat2, double lon2) {
  constexpr double kEarthRadiusKm = 6371.0;
  const auto rad = [](double deg) { return deg * std::numbers::pi / 180.0; };
  const double dlat = rad(lat2 - lat1);
  const double dlon = rad(lon2 - lon1);
  const double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
                   std::cos(rad(lat1)) * std::cos(rad(lat2)) * std::sin(dlon / 2) * std::sin(dlon / 2);
  return 2 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

Monitor::Monitor(const fabric::Fabric& fabric, ProbeOracle oracle, std::size_t history_capacity)
    : fabric_(fabric), oracle_(std::move(oracle)), history_(history_capacity) {}

void Monitor::add_probe(Probe probe) {
  if (probe.period <= 0) throw Error(ErrorCode::InvalidArgument, "probe period must be positive");
  if (probe.timeout <= 0) throw Error(ErrorCode::InvalidArgument, "probe timeout must be positive");
  probes_.push_back(std::move(probe));
}

void Monitor::add_default_probes() {
  const auto& g = fabric_.settings();
  const auto add = [&](std::string target, ServiceKind kind) {
    add_probe(Probe{{std::move(target), kind}, g.probe_period, g.probe_timeout, fabric_.now()});
  };
  for (const auto& s : fabric_.scenario().sites) {
    add(s.id, ServiceKind::Gatekeeper);
    add(s.id, ServiceKind::Gris);
    const auto& ses = fabric_.scenario().ses;
    if (std::any_of(ses.begin(), ses.end(), [&](const fabric::SeSpec& e) { return e.site == s.id; }))
      add(s.id, ServiceKind::GridFtp);
  }
  for (const auto& c : fabric_.scenario().services) {
    switch (c.kind) {
      case fabric::CentralKind::Rb: add(c.id, ServiceKind::Rb); break;
      case fabric::CentralKind::Rc: add(c.id, ServiceKind::Rc); break;
      case fabric::CentralKind::Ii: add(c.id, ServiceKind::Gris); break;
    }
  }
}

std::pair<double, double> Monitor::coords_of(const std::string& target) const {
  if (const auto* s = fabric_.scenario().find_site(target)) return {s->lat, s->lon};
  if (const auto* c = fabric_.find_service(target)) return {c->lat, c->lon};
  return {0.0, 0.0};
}

std::int64_t Monitor::latency_ms(double lat, double lon) const {
  const auto& sites = fabric_.scenario().sites;
  if (sites.empty()) return 1;
  const auto& center_id = fabric_.settings().operations_center;
  const auto* center = center_id.empty() ? &sites.front() : fabric_.scenario().find_site(center_id);
  // Roughly a millisecond per hundred kilometres plus a fixed handshake.
  return 2 + std::llround(distance_km(center->lat, center->lon, lat, lon) / 100.0);
}

ProbeResult Monitor::observe(const ProbeTarget& target, SimTime now, SimTime timeout) const {
  const auto [lat, lon] = coords_of(target.target);
  ProbeResult r{now, target, ProbeStatus::Up, latency_ms(lat, lon), "ok"};
  if (oracle_.down && oracle_.down(target, now)) {
    r.status = ProbeStatus::Down;
    r.detail = "no response";
    r.latency_ms = timeout * 1000;
  } else if (r.latency_ms > timeout * 1000) {
    r.status = ProbeStatus::Down;
    r.detail = "timeout";
  } else if (oracle_.warning) {
    if (auto why = oracle_.warning(target, now)) {
      r.status = ProbeStatus::Warn;
      r.detail = std::move(*why);
    }
  }
  return r;
}

std::vector<ProbeResult> Monitor::run_probes(SimTime now) {
  std::vector<ProbeResult> out;
  for (auto& p : probes_) {
    if (p.next_due > now) continue;
    auto r = observe(p.target, now, p.timeout);
    p.next_due = now + p.period;
    latest_.insert_or_assign(p.target, r);
    history_.push(r);
    out.push_back(std::move(r));
  }
  return out;
}

std::optional<ProbeResult> Monitor::latest(const ProbeTarget& target) const {
  const auto it = latest_.find(target);
  if (it == latest_.end()) return std::nullopt;
  return it->second;
}

ServiceStatus Monitor::status_of(const ProbeTarget& target, SimTime now) const {
  auto r = latest(target);
  if (!r) r = observe(target, now, fabric_.settings().probe_timeout);
  return {std::string(fabric::to_string(target.kind)), r->status, r->latency_ms, r->detail, r->t};
}

HostMetrics Monitor::metrics_for(const fabric::SiteSpec& site) const {
  int total = 0;
  std::size_t running = 0;
  std::size_t waiting = 0;
  for (const auto& id : fabric_.ce_ids()) {
    const auto& ce = fabric_.ce(id);
    if (ce.spec().site != site.id) continue;
    total += ce.total_cpus();
    running += ce.running().size();
    waiting += ce.waiting();
  }
  std::int64_t capacity = 0;
  std::int64_t used = 0;
  for (const auto& se : fabric_.scenario().ses) {
    if (se.site != site.id) continue;
    capacity += se.bytes;
    used += fabric_.files().used("se:" + se.host);
  }
  HostMetrics m;
  const double cpus = std::max(1, total);
  m.load = static_cast<double>(running) / cpus;
  m.memory = 0.2 + 0.6 * m.load;
  m.swap = 0.1 * m.load;
  m.disk = capacity > 0 ? static_cast<double>(used) / static_cast<double>(capacity) : 0.0;
  m.network = std::min(1.0, static_cast<double>(running + waiting) / (2.0 * cpus));
  return m;
}

MapSnapshot Monitor::aggregate(const MapFilter& filter, SimTime now) const {
  const auto& sc = fabric_.scenario();
  std::set<std::string> keep;
  for (const auto& s : sc.sites) keep.insert(s.id);

  switch (filter.kind) {
    case MapFilter::Kind::None: break;
    case MapFilter::Kind::Vo: {
      if (std::none_of(sc.vos.begin(), sc.vos.end(), [&](const fabric::VoSpec& v) { return v.name == filter.value; }))
        throw Error(ErrorCode::UnknownFilterValue, "unknown VO " + filter.value);
      keep.clear();
      for (const auto& c : sc.ces)
        if (std::find(c.vos.begin(), c.vos.end(), filter.value) != c.vos.end()) keep.insert(c.site);
      break;
    }
    case MapFilter::Kind::Country: {
      std::erase_if(keep, [&](const std::string& id) { return sc.find_site(id)->country != filter.value; });
      if (keep.empty()) throw Error(ErrorCode::UnknownFilterValue, "no site in country " + filter.value);
      break;
    }
    case MapFilter::Kind::Site: {
      if (!sc.find_site(filter.value)) throw Error(ErrorCode::UnknownFilterValue, "unknown site " + filter.value);
      keep = {filter.value};
      break;
    }
  }

  MapSnapshot snap;
  snap.t = now;
  snap.filter = filter.to_string();
  for (const auto& s : sc.sites) {
    if (!keep.contains(s.id)) continue;
    SiteStatus st{s.id, s.country, s.lat, s.lon, {}, ProbeStatus::Up, metrics_for(s)};
    for (const auto& p : probes_) {
      if (p.target.target != s.id) continue;
      st.services.push_back(status_of(p.target, now));
      st.rollup = worst(st.rollup, st.services.back().status);
    }
    snap.sites.push_back(std::move(st));
  }
  for (const auto& c : sc.services) {
    SiteStatus st{c.id, c.site.empty() ? c.location : sc.find_site(c.site)->country, c.lat, c.lon, {}, ProbeStatus::Up, {}};
    for (const auto& p : probes_) {
      if (p.target.target != c.id) continue;
      st.services.push_back(status_of(p.target, now));
      st.rollup = worst(st.rollup, st.services.back().status);
    }
    snap.central.push_back(std::move(st));
  }
  return snap;
}

namespace {

json site_json(const SiteStatus& s) {
  json services = json::array();
  for (const auto& v : s.services)
    services.push_back({{"service", v.service},
                        {"status", to_string(v.status)},
                        {"latency_ms", v.latency_ms},
                        {"detail", v.detail},
                        {"t", v.checked_at}});
  return {{"id", s.id},
          {"country", s.country},
          {"lat", s.lat},
          {"lon", s.lon},
          {"status", to_string(s.rollup)},
          {"color", color_of(s.rollup)},
          {"services", std::move(services)},
          {"metrics",
           {{"load", s.metrics.load},
            {"memory", s.metrics.memory},
            {"swap", s.metrics.swap},
            {"disk", s.metrics.disk},
            {"network", s.metrics.network}}}};
}

SiteStatus site_from(const json& j) {
  SiteStatus s;
  s.id = j.at("id").get<std::string>();
  s.country = j.at("country").get<std::string>();
  s.lat = j.at("lat").get<double>();
  s.lon = j.at("lon").get<double>();
  s.rollup = parse_probe_status(j.at("status").get<std::string>());
  for (const auto& v : j.at("services"))
    s.services.push_back({v.at("service").get<std::string>(), parse_probe_status(v.at("status").get<std::string>()),
                          v.at("latency_ms").get<std::int64_t>(), v.at("detail").get<std::string>(),
                          v.at("t").get<SimTime>()});
  const auto& m = j.at("metrics");
  s.metrics = {m.at("load").get<double>(), m.at("memory").get<double>(), m.at("swap").get<double>(),
               m.at("disk").get<double>(), m.at("network").get<double>()};
  return s;
}

}  // namespace

std::string export_map(const MapSnapshot& snapshot) {
  json sites = json::array();
  for (const auto& s : snapshot.sites) sites.push_back(site_json(s));
  json central = json::array();
  for (const auto& s : snapshot.central) central.push_back(site_json(s));
  const json doc{{"version", 1},
                 {"t", snapshot.t},
                 {"filter", snapshot.filter},
                 {"sites", std::move(sites)},
                 {"central", std::move(central)}};
  return doc.dump(2) + "\n";
}

MapSnapshot parse_map(std::string_view text) {
  try {
    const auto doc = json::parse(text);
    MapSnapshot snap;
    snap.t = doc.at("t").get<SimTime>();
    snap.filter = doc.at("filter").get<std::string>();
    for (const auto& s : doc.at("sites")) snap.sites.push_back(site_from(s));
    for (const auto& s : doc.at("central")) snap.central.push_back(site_from(s));
    return snap;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed map document: ") + e.what());
  }
}

}  // namespace worldgrid::monitor
