// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>

#include "worldgrid/auth/context.hpp"
#include "worldgrid/datamgmt/replica.hpp"
#include "worldgrid/fabric/fabric.hpp"
#include "worldgrid/infosys/index.hpp"
#include "worldgrid/monitor/monitor.hpp"
#include "worldgrid/wms/workload.hpp"

namespace worldgrid::gateway {

// Index node ids used for a site's information publishers.
std::string gris_node(std::string_view site);
std::string site_giis_node(std::string_view site);

// A whole simulated grid built from one scenario: fabric, information
// hierarchy, security, replica catalogues, brokers and monitoring, with
// the periodic refresh work running as fabric events.
class Testbed {
 public:
  Testbed(fabric::Scenario scenario, std::uint64_t seed);
  static std::unique_ptr<Testbed> load(const std::string& scenario_path, std::uint64_t seed);

  Testbed(const Testbed&) = delete;
  Testbed& operator=(const Testbed&) = delete;

  fabric::Fabric& fabric() noexcept { return fabric_; }
  const fabric::Fabric& fabric() const noexcept { return fabric_; }
  infosys::InformationService& info() noexcept { return info_; }
  const infosys::InformationService& info() const noexcept { return info_; }
  auth::SecurityContext& security() noexcept { return *security_; }
  const auth::SecurityContext& security() const noexcept { return *security_; }
  wms::WorkloadManager& wms() noexcept { return *wms_; }
  const wms::WorkloadManager& wms() const noexcept { return *wms_; }
  monitor::Monitor& monitor() noexcept { return *monitor_; }
  const monitor::Monitor& monitor() const noexcept { return *monitor_; }

  datamgmt::ReplicaCatalog& catalog(std::string_view id);  // InvalidArgument
  datamgmt::ReplicaManager& replicas(std::string_view id);
  // Catalogue that direct jobs and scenario replicas use (smallest id).
  const std::string& default_catalog() const;

  SimTime now() const noexcept { return fabric_.now(); }
  void advance(SimTime until) { fabric_.advance(until); }
  void advance_by(SimTime seconds) { fabric_.advance(fabric_.now() + seconds); }
  // Advances in probe-period steps until every job is terminal or `limit`
  // virtual seconds pass. True when all jobs finished.
  bool run_until_idle(SimTime limit);

  // Failure injection that also resynchronises the information hierarchy
  // when the window closes.
  void inject_failure(fabric::FailureSpec failure);

  // Re-publishes every reachable GRIS and renews registrations.
  void refresh_information();
  void refresh_crls();

  // Fresh registration chain from the site's GRIS to at least one top index.
  bool registration_fresh(std::string_view site, SimTime now) const;

  std::vector<std::string> top_indexes() const;

  // Order-independent check that catalogue entries exist on their SEs.
  std::optional<std::string> consistency_violation() const;

 private:
  void build_security();
  void build_information();
  void build_catalogs();
  void build_monitor();
  void schedule_periodic(SimTime period, std::function<void()> work);
  void schedule_recovery(const fabric::FailureSpec& f);

  fabric::Fabric fabric_;
  infosys::InformationService info_;
  infosys::Schema schema_;
  std::unique_ptr<auth::SecurityContext> security_;
  std::map<std::string, std::unique_ptr<datamgmt::ReplicaCatalog>, std::less<>> catalogs_;
  std::map<std::string, std::unique_ptr<datamgmt::ReplicaManager>, std::less<>> managers_;
  std::unique_ptr<wms::WorkloadManager> wms_;
  std::unique_ptr<monitor::Monitor> monitor_;
  std::map<std::string, monitor::ProbeStatus> last_status_;
};

}  // namespace worldgrid::gateway
