// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "worldgrid/common/types.hpp"

namespace worldgrid::auth {

// Modeled X.509 certificate; there is no cryptography, only the fields the
// authorization chain looks at.
struct CertificateRecord {
  std::string subject;
  std::string issuer_ca;
  std::int64_t serial = 0;
  SimTime not_before = 0;
  SimTime not_after = 0;

  // Throws InvalidArgument unless not_before < not_after.
  void validate() const;
};

// Explicit per-flavor allowlists of trusted CAs.
class CaRegistry {
 public:
  void trust(std::string ca, Flavor flavor);
  bool trusts(std::string_view ca, Flavor flavor) const;
  const std::set<std::string, std::less<>>& trusted(Flavor flavor) const;

  // EDG sites trust the EDG CAs and "doe" but not "globus"; VDT sites trust
  // all three.
  static CaRegistry worldgrid_default(std::span<const std::string> edg_cas);

 private:
  std::set<std::string, std::less<>> edg_;
  std::set<std::string, std::less<>> vdt_;
};

struct Crl {
  std::string ca;
  std::set<std::int64_t> revoked_serials;
  SimTime issued_at = 0;
  SimTime next_update = 1;

  bool fresh_at(SimTime now) const noexcept { return now <= next_update; }
  bool lists(std::int64_t serial) const { return revoked_serials.contains(serial); }
};

// A CA's revocation list as published over time: re-issued every `period`
// seconds, each issue valid for `validity` seconds.
class CertificationAuthority {
 public:
  CertificationAuthority(std::string id, SimTime period, SimTime validity);

  const std::string& id() const noexcept { return id_; }
  void revoke(std::int64_t serial, SimTime at);
  Crl current_crl(SimTime now) const;

 private:
  std::string id_;
  SimTime period_;
  SimTime validity_;
  std::map<std::int64_t, SimTime> revoked_;
};

// Returns the subject, or throws UntrustedCa, Expired, Revoked, StaleCrl
// (checked in that order). A missing CRL for the issuer counts as stale.
std::string authenticate(const CertificateRecord& cert, Flavor flavor, SimTime now, std::span<const Crl> crls,
                         const CaRegistry& cas);

struct VoRegistry {
  std::string name;
  std::vector<std::string> members;  // insertion order, unique
  std::set<std::string> usage_policy_signed;

  void add_member(std::string subject, bool signed_policy = true);
  bool remove_member(std::string_view subject);
  bool is_member(std::string_view subject) const;
  bool has_signed(std::string_view subject) const { return usage_policy_signed.contains(std::string(subject)); }
};

// `[vo <name>]` sections, one subject per line. A leading '?' marks a member
// who has not signed the usage policy.
std::vector<VoRegistry> parse_vo_file(std::string_view text);
std::string write_vo_file(std::span<const VoRegistry> vos);

struct MapOverride {
  std::string subject;
  std::optional<std::string> account;  // nullopt: DENY
};

struct SitePolicy {
  std::vector<std::string> supported_vos;
  std::vector<MapOverride> overrides;
};

struct Mapping {
  std::string subject;
  std::string account;
  bool operator==(const Mapping&) const = default;
};

class GridMapfile {
 public:
  GridMapfile() = default;
  explicit GridMapfile(std::vector<Mapping> mappings);

  const std::vector<Mapping>& mappings() const noexcept { return mappings_; }
  std::optional<std::string> account_for(std::string_view subject) const;
  bool empty() const noexcept { return mappings_.empty(); }

  // `"<subject>" <account>` per line.
  std::string serialize() const;
  static GridMapfile parse(std::string_view text);

  bool operator==(const GridMapfile&) const = default;

 private:
  std::vector<Mapping> mappings_;
};

// Pool account name for the index-th (0-based) member of a VO: `<vo>NNN`,
// numbered from 001.
std::string pool_account(std::string_view vo, std::size_t index);

// Members of supported VOs who signed the usage policy, in VO order then
// member order; the first supporting VO wins for shared members. Overrides
// apply last. Throws UnknownVo, InvalidArgument (duplicate VO names).
GridMapfile mkgridmap(std::span<const VoRegistry> vos, const SitePolicy& policy);

// Throws NotAuthorized.
std::string authorize(std::string_view subject, const GridMapfile& mapfile);

// Per-site CRL copies refreshed from the CAs on a schedule.
class CrlDistribution {
 public:
  struct Outcome {
    std::string site;
    std::string ca;
    bool fetched = false;
    bool operator==(const Outcome&) const = default;
  };
  // Decides whether the simulated fetch of `ca`'s list at `site` works.
  using FetchPolicy = std::function<bool(std::string_view site, std::string_view ca)>;

  void add_ca(CertificationAuthority ca);
  void add_site(std::string site);

  CertificationAuthority& ca(std::string_view id);
  const std::map<std::string, CertificationAuthority, std::less<>>& cas() const noexcept { return cas_; }

  // Failed fetches keep the previous copy, which may go stale.
  std::vector<Outcome> refresh(SimTime now, const FetchPolicy& fetch_ok = {});

  std::vector<Crl> site_copies(std::string_view site) const;
  bool site_has_stale(std::string_view site, SimTime now) const;

 private:
  std::map<std::string, CertificationAuthority, std::less<>> cas_;
  std::map<std::string, std::map<std::string, Crl>, std::less<>> copies_;
};

}  // namespace worldgrid::auth
