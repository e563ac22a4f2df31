// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/gateway/testbed.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "worldgrid/common/error.hpp"
#include "worldgrid/infosys/schema.hpp"

namespace worldgrid::gateway {

using fabric::CentralKind;
using fabric::ServiceKind;

std::string gris_node(std::string_view site) { return "gris:" + std::string(site); }
std::string site_giis_node(std::string_view site) { return "giis:" + std::string(site); }

namespace {

// Node id -> (fabric target, service) whose failure makes it unreachable.
std::pair<std::string, ServiceKind> node_target(std::string_view node) {
  if (node.starts_with("gris:")) return {std::string(node.substr(5)), ServiceKind::Gris};
  if (node.starts_with("giis:")) return {std::string(node.substr(5)), ServiceKind::Gris};
  return {std::string(node), ServiceKind::Gris};
}

}  // namespace

Testbed::Testbed(fabric::Scenario scenario, std::uint64_t seed)
    : fabric_(std::move(scenario), seed), schema_(infosys::worldgrid_schema()) {
  build_security();
  build_information();
  build_catalogs();

  wms::GridServices services{fabric_, info_, *security_, {}};
  for (auto& [id, manager] : managers_) services.catalogs.emplace(id, manager.get());
  wms_ = std::make_unique<wms::WorkloadManager>(std::move(services));
  for (const auto& b : fabric_.scenario().brokers) wms_->add_broker(wms::BrokerConfig::from_spec(b));

  build_monitor();
  for (const auto& f : fabric_.failures()) schedule_recovery(f);

  const auto& g = fabric_.settings();
  schedule_periodic(g.info_refresh, [this] { refresh_information(); });
  schedule_periodic(g.crl_refresh, [this] { refresh_crls(); });
  schedule_periodic(g.probe_period, [this] {
    for (const auto& r : monitor_->run_probes(fabric_.now())) {
      const auto key = r.target.target + "/" + std::string(fabric::to_string(r.target.kind));
      const auto it = last_status_.find(key);
      if (it == last_status_.end() || it->second != r.status) {
        fabric_.emit("monitor.status", key, fmt::format("{} {}", monitor::to_string(r.status), r.detail));
        last_status_[key] = r.status;
      }
    }
  });
}

std::unique_ptr<Testbed> Testbed::load(const std::string& scenario_path, std::uint64_t seed) {
  return std::make_unique<Testbed>(fabric::load_scenario_file(scenario_path), seed);
}

void Testbed::schedule_periodic(SimTime period, std::function<void()> work) {
  auto shared = std::make_shared<std::function<void()>>();
  *shared = [this, period, work, weak = std::weak_ptr<std::function<void()>>(shared)]() {
    work();
    if (auto self = weak.lock()) fabric_.events().schedule_in(period, [self] { (*self)(); });
  };
  // The queue keeps the only strong reference through the scheduled copy.
  fabric_.events().schedule_in(period, [shared] { (*shared)(); });
}

void Testbed::build_security() {
  const auto& sc = fabric_.scenario();
  auth::CaRegistry cas;
  auth::CrlDistribution crls;
  for (const auto& ca : sc.cas) {
    for (auto flavor : ca.trusted_by) cas.trust(ca.id, flavor);
    crls.add_ca(auth::CertificationAuthority(ca.id, ca.crl_period, ca.crl_validity));
  }
  for (const auto& r : sc.revocations) crls.ca(r.ca).revoke(r.serial, r.at);
  security_ = std::make_unique<auth::SecurityContext>(std::move(cas), std::move(crls));

  for (const auto& vo : sc.vos) security_->add_vo(auth::VoRegistry{vo.name, {}, {}});
  for (const auto& m : sc.members) security_->add_member(m.vo, m.subject, m.signed_policy);
  for (const auto& c : sc.certs)
    security_->add_certificate(auth::CertificateRecord{c.subject, c.ca, c.serial, c.not_before, c.not_after});

  for (const auto& site : sc.sites) {
    auth::SitePolicy policy;
    for (const auto& vo : sc.vos) {
      const bool supported = std::any_of(sc.ces.begin(), sc.ces.end(), [&](const fabric::CeSpec& c) {
        return c.site == site.id && std::find(c.vos.begin(), c.vos.end(), vo.name) != c.vos.end();
      });
      if (supported) policy.supported_vos.push_back(vo.name);
    }
    for (const auto& o : sc.overrides)
      if (o.site == site.id) policy.overrides.push_back({o.subject, o.account});
    security_->set_site_policy(site.id, site.flavor, std::move(policy));
  }
  refresh_crls();
}

void Testbed::refresh_crls() {
  const auto now = fabric_.now();
  const auto outcomes = security_->crls().refresh(now, [&](std::string_view site, std::string_view) {
    return fabric_.service_up(site, ServiceKind::CrlFetch, now);
  });
  for (const auto& o : outcomes)
    if (!o.fetched) fabric_.emit("crl.fetch-failed", o.site, o.ca);
}

void Testbed::build_information() {
  const auto& sc = fabric_.scenario();
  for (const auto& s : sc.services)
    if (s.kind == CentralKind::Ii)
      info_.add_node(s.id, infosys::IndexLevel::TopGiis,
                     s.backup_of.empty() ? std::nullopt : std::optional<std::string>(s.backup_of));
  for (const auto& site : sc.sites) {
    info_.add_node(gris_node(site.id), infosys::IndexLevel::Gris);
    info_.add_node(site_giis_node(site.id), infosys::IndexLevel::SiteGiis);
  }
  info_.set_reachability([this](std::string_view node) {
    const auto [target, kind] = node_target(node);
    return fabric_.service_up(target, kind);
  });
  refresh_information();
}

std::vector<std::string> Testbed::top_indexes() const {
  std::vector<std::string> out;
  for (const auto& s : fabric_.scenario().services)
    if (s.kind == CentralKind::Ii) out.push_back(s.id);
  return out;
}

void Testbed::refresh_information() {
  const auto now = fabric_.now();
  const auto ttl = fabric_.settings().registration_ttl;
  const auto tops = top_indexes();
  for (const auto& site : fabric_.scenario().sites) {
    const auto gris = gris_node(site.id);
    const auto giis = site_giis_node(site.id);
    if (!info_.reachable(gris)) continue;
    const auto source = infosys::InfoSource::provider(gris, [this, id = site.id] { return fabric_.site_entries(id); });
    auto outcome = infosys::load_sources(std::span(&source, 1), schema_);
    for (const auto& r : outcome.report.rejected)
      fabric_.emit("info.reject", gris, fmt::format("{}: {}", r.entry.dn.to_string(), r.reason));
    info_.publish(gris, std::move(outcome.directory));
    info_.register_child(giis, gris, ttl, now);
    for (const auto& top : tops)
      if (info_.reachable(top)) info_.register_child(top, giis, ttl, now);
  }
}

bool Testbed::registration_fresh(std::string_view site, SimTime now) const {
  if (!info_.registration_fresh(site_giis_node(site), gris_node(site), now)) return false;
  const auto tops = top_indexes();
  return std::any_of(tops.begin(), tops.end(),
                     [&](const std::string& top) { return info_.registration_fresh(top, site_giis_node(site), now); });
}

void Testbed::build_catalogs() {
  const auto& sc = fabric_.scenario();
  for (const auto& s : sc.services) {
    if (s.kind != CentralKind::Rc) continue;
    auto catalog = std::make_unique<datamgmt::ReplicaCatalog>(s.id);
    managers_.emplace(s.id, std::make_unique<datamgmt::ReplicaManager>(fabric_, *catalog));
    catalogs_.emplace(s.id, std::move(catalog));
  }
  if (catalogs_.empty() && !sc.replicas.empty())
    throw Error(ErrorCode::InvalidArgument, "scenario lists replicas but no catalogue service");
  for (const auto& r : sc.replicas) {
    const auto lfn = datamgmt::LogicalFileName::parse(r.lfn);
    datamgmt::PhysicalFileName pfn{"gridftp", r.se, datamgmt::physical_path(lfn), r.size};
    fabric_.files().put("se:" + r.se, pfn.path, r.size);
    catalogs_.begin()->second->add(lfn, std::move(pfn));
  }
}

void Testbed::build_monitor() {
  monitor::ProbeOracle oracle;
  oracle.down = [this](const monitor::ProbeTarget& t, SimTime now) {
    return !fabric_.service_up(t.target, t.kind, now);
  };
  oracle.warning = [this](const monitor::ProbeTarget& t, SimTime now) -> std::optional<std::string> {
    if (!fabric_.has_site(t.target)) return std::nullopt;
    if (t.kind == ServiceKind::Gatekeeper && security_->crls().site_has_stale(t.target, now)) return "stale CRL";
    if (t.kind == ServiceKind::Gris && !registration_fresh(t.target, now)) return "stale registration";
    return std::nullopt;
  };
  monitor_ = std::make_unique<monitor::Monitor>(fabric_, std::move(oracle));
  monitor_->add_default_probes();
  for (const auto& r : monitor_->run_probes(fabric_.now()))
    last_status_[r.target.target + "/" + std::string(fabric::to_string(r.target.kind))] = r.status;
}

void Testbed::schedule_recovery(const fabric::FailureSpec& f) {
  if (f.service != ServiceKind::Gris || f.end <= fabric_.now()) return;
  // A recovering index or publisher is re-populated straight away instead
  // of waiting for the next refresh tick.
  fabric_.events().schedule_at(f.end, [this] { refresh_information(); });
}

void Testbed::inject_failure(fabric::FailureSpec failure) {
  fabric_.inject_failure(failure);
  schedule_recovery(failure);
}

datamgmt::ReplicaCatalog& Testbed::catalog(std::string_view id) {
  const auto it = catalogs_.find(id);
  if (it == catalogs_.end()) throw Error(ErrorCode::InvalidArgument, "unknown replica catalogue " + std::string(id));
  return *it->second;
}

datamgmt::ReplicaManager& Testbed::replicas(std::string_view id) {
  const auto it = managers_.find(id);
  if (it == managers_.end()) throw Error(ErrorCode::InvalidArgument, "unknown replica catalogue " + std::string(id));
  return *it->second;
}

const std::string& Testbed::default_catalog() const {
  if (catalogs_.empty()) throw Error(ErrorCode::InvalidArgument, "scenario has no replica catalogue");
  return catalogs_.begin()->first;
}

bool Testbed::run_until_idle(SimTime limit) {
  const auto stop = fabric_.now() + limit;
  const auto step = fabric_.settings().probe_period;
  while (!wms_->all_terminal() && fabric_.now() < stop) fabric_.advance(std::min(stop, fabric_.now() + step));
  return wms_->all_terminal();
}

std::optional<std::string> Testbed::consistency_violation() const {
  for (const auto& [id, manager] : managers_)
    if (auto v = manager->consistency_violation()) return v;
  return std::nullopt;
}

}  // namespace worldgrid::gateway
