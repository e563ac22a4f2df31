// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "worldgrid/auth/auth.hpp"

namespace worldgrid::auth {

// Everything a resource consults before accepting work from a subject:
// certificates, trust anchors, CRL copies, VO registries and the generated
// per-site grid-mapfiles.
class SecurityContext {
 public:
  SecurityContext(CaRegistry cas, CrlDistribution crls);

  const CaRegistry& cas() const noexcept { return cas_; }
  CrlDistribution& crls() noexcept { return crls_; }
  const CrlDistribution& crls() const noexcept { return crls_; }

  void add_certificate(CertificateRecord cert);
  bool has_certificate(std::string_view subject) const;
  const CertificateRecord& certificate(std::string_view subject) const;  // UnknownSubject

  void add_vo(VoRegistry vo);
  const std::vector<VoRegistry>& vos() const noexcept { return vos_; }
  const VoRegistry& vo(std::string_view name) const;  // UnknownVo
  bool is_member(std::string_view vo, std::string_view subject) const;
  // Membership changes regenerate every mapfile.
  void add_member(std::string_view vo, std::string subject, bool signed_policy = true);
  bool remove_member(std::string_view vo, std::string_view subject);

  void set_site_policy(std::string site, Flavor flavor, SitePolicy policy);
  const SitePolicy& site_policy(std::string_view site) const;
  Flavor site_flavor(std::string_view site) const;
  std::vector<std::string> sites() const;
  const GridMapfile& mapfile(std::string_view site) const;  // UnknownSite
  void regenerate_mapfiles();

  // Authenticates against the site's CRL copies and trust set, then maps.
  // Returns the local account. Throws UnknownSubject, UntrustedCa, Expired,
  // Revoked, StaleCrl, NotAuthorized.
  std::string check_access(std::string_view subject, std::string_view site, SimTime now) const;

 private:
  struct SiteState {
    Flavor flavor = Flavor::EDG;
    SitePolicy policy;
    GridMapfile mapfile;
  };
  VoRegistry& mutable_vo(std::string_view name);
  const SiteState& site_state(std::string_view site) const;

  CaRegistry cas_;
  CrlDistribution crls_;
  std::map<std::string, CertificateRecord, std::less<>> certs_;
  std::vector<VoRegistry> vos_;
  std::map<std::string, SiteState, std::less<>> sites_;
};

}  // namespace worldgrid::auth
