// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "worldgrid/common/types.hpp"

namespace worldgrid::fabric {

enum class Lrms { PBS, LSF, Condor };
enum class ServiceKind { Gatekeeper, Gris, GridFtp, Rb, Rc, CrlFetch };

std::string_view to_string(Lrms l) noexcept;
std::string_view to_string(ServiceKind k) noexcept;
Lrms parse_lrms(std::string_view text);
ServiceKind parse_service_kind(std::string_view text);

struct GridSettings {
  std::string name = "grid";
  SimTime duration_min = 30;
  SimTime duration_max = 600;
  double bandwidth_intra_site = 100.0;      // MB/s
  double bandwidth_same_continent = 100.0;  // MB/s
  double bandwidth_intercontinental = 10.0; // MB/s
  SimTime info_refresh = 30;
  SimTime registration_ttl = 60;
  SimTime probe_period = 30;
  SimTime probe_timeout = 5;
  SimTime crl_refresh = 1800;
  std::int64_t output_sandbox_file_bytes = 1024;
  std::int64_t output_data_bytes = 50'000'000;
  std::string operations_center;  // site used as the probing origin
};

struct SiteSpec {
  std::string id;
  std::string country;
  Continent continent = Continent::EU;
  double lat = 0;
  double lon = 0;
  Flavor flavor = Flavor::EDG;
  std::string os;
  bool glue = false;
  bool brokerable = true;
  bool wn_outbound = true;
  bool inbound_ports_open = true;
  bool kerberos = false;  // recorded, ignored: GSI is the only mechanism
};

struct CeSpec {
  std::string site;
  std::string host;
  int port = 2119;
  Lrms lrms = Lrms::PBS;
  std::string queue = "long";
  int cpus = 1;
  int wns = 1;
  std::vector<std::string> vos;
  std::vector<std::string> tags;

  std::string id() const;
};

struct SeSpec {
  std::string site;
  std::string host;
  std::int64_t bytes = 0;
  std::vector<std::string> protocols{"gridftp"};
};

enum class CentralKind { Rb, Ii, Rc };

struct CentralServiceSpec {
  std::string id;
  CentralKind kind = CentralKind::Rb;
  std::string location;  // label only
  std::string site;      // empty when not hosted at a fabric site
  Continent continent = Continent::EU;  // taken from the site when hosted
  double lat = 0;                       // likewise
  double lon = 0;
  std::string backup_of;
};

struct BrokerSpec {
  std::string id;
  std::string info_primary;
  std::string info_backup;
  std::string replica_catalog;
  bool glue_aware = false;
  bool strict_data = false;
  std::string default_rank = "other.FreeCPUs";
};

struct LinkSpec {
  std::string a;  // site id or continent tag
  std::string b;
  double mbps = 0;
};

struct FailureSpec {
  std::string target;  // site id or central service id
  ServiceKind service = ServiceKind::Gatekeeper;
  SimTime start = 0;
  SimTime end = 0;
};

struct CaSpec {
  std::string id;
  std::vector<Flavor> trusted_by;
  SimTime crl_period = 3600;
  SimTime crl_validity = 7200;
};

struct RevocationSpec {
  std::string ca;
  std::int64_t serial = 0;
  SimTime at = 0;
};

struct VoSpec {
  std::string name;
  std::string server;
};

struct MemberSpec {
  std::string vo;
  std::string subject;
  bool signed_policy = true;
};

struct CertSpec {
  std::string subject;
  std::string ca;
  std::int64_t serial = 0;
  SimTime not_before = 0;
  SimTime not_after = 0;
};

struct OverrideSpec {
  std::string site;
  std::string subject;
  std::optional<std::string> account;  // nullopt: DENY
};

struct UiSpec {
  std::string id;
  std::string location;
  std::string site;
  Continent continent = Continent::EU;
};

struct FileSpec {
  std::string at;  // "ui:<id>", "wn:<site>", "ce:<ce id>" or "se:<host>"
  std::string path;
  std::int64_t size = 0;
};

struct ReplicaSpec {
  std::string lfn;
  std::string se;
  std::int64_t size = 0;
};

// Everything a scenario file declares.
struct Scenario {
  GridSettings grid;
  std::vector<SiteSpec> sites;
  std::vector<CeSpec> ces;
  std::vector<SeSpec> ses;
  std::vector<CentralServiceSpec> services;
  std::vector<BrokerSpec> brokers;
  std::vector<LinkSpec> links;
  std::vector<FailureSpec> failures;
  std::vector<CaSpec> cas;
  std::vector<RevocationSpec> revocations;
  std::vector<VoSpec> vos;
  std::vector<MemberSpec> members;
  std::vector<CertSpec> certs;
  std::vector<OverrideSpec> overrides;
  std::vector<UiSpec> uis;
  std::vector<FileSpec> files;
  std::vector<ReplicaSpec> replicas;

  const SiteSpec* find_site(std::string_view id) const;
};

// One record per line: `<kind> key=value key="quoted value" ...`; '#'
// comments. Throws Error(ScenarioParseError) with the line number for
// malformed records, unknown keys, duplicate ids, dangling references and
// flavor violations.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario_file(const std::string& path);

}  // namespace worldgrid::fabric
