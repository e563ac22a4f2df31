// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/auth/context.hpp"

#include <algorithm>

#include "worldgrid/common/error.hpp"

namespace worldgrid::auth {

SecurityContext::SecurityContext(CaRegistry cas, CrlDistribution crls) : cas_(std::move(cas)), crls_(std::move(crls)) {}

void SecurityContext::add_certificate(CertificateRecord cert) {
  cert.validate();
  auto subject = cert.subject;
  certs_.insert_or_assign(std::move(subject), std::move(cert));
}

bool SecurityContext::has_certificate(std::string_view subject) const { return certs_.find(subject) != certs_.end(); }

const CertificateRecord& SecurityContext::certificate(std::string_view subject) const {
  const auto it = certs_.find(subject);
  if (it == certs_.end()) throw Error(ErrorCode::UnknownSubject, "no certificate for " + std::string(subject));
  return it->second;
}

void SecurityContext::add_vo(VoRegistry vo) {
  if (std::any_of(vos_.begin(), vos_.end(), [&](const VoRegistry& v) { return v.name == vo.name; }))
    throw Error(ErrorCode::InvalidArgument, "duplicate VO " + vo.name);
  vos_.push_back(std::move(vo));
  regenerate_mapfiles();
}

const VoRegistry& SecurityContext::vo(std::string_view name) const {
  for (const auto& v : vos_)
    if (v.name == name) return v;
  throw Error(ErrorCode::UnknownVo, "unknown VO " + std::string(name));
}

VoRegistry& SecurityContext::mutable_vo(std::string_view name) {
  for (auto& v : vos_)
    if (v.name == name) return v;
  throw Error(ErrorCode::UnknownVo, "unknown VO " + std::string(name));
}

bool SecurityContext::is_member(std::string_view vo_name, std::string_view subject) const {
  return std::any_of(vos_.begin(), vos_.end(), [&](const VoRegistry& v) { return v.name == vo_name && v.is_member(subject); });
}

void SecurityContext::add_member(std::string_view vo_name, std::string subject, bool signed_policy) {
  mutable_vo(vo_name).add_member(std::move(subject), signed_policy);
  regenerate_mapfiles();
}

bool SecurityContext::remove_member(std::string_view vo_name, std::string_view subject) {
  const bool removed = mutable_vo(vo_name).remove_member(subject);
  if (removed) regenerate_mapfiles();
  return removed;
}

void SecurityContext::set_site_policy(std::string site, Flavor flavor, SitePolicy policy) {
  SiteState state{flavor, std::move(policy), {}};
  state.mapfile = mkgridmap(vos_, state.policy);
  crls_.add_site(site);
  sites_.insert_or_assign(std::move(site), std::move(state));
}

const SecurityContext::SiteState& SecurityContext::site_state(std::string_view site) const {
  const auto it = sites_.find(site);
  if (it == sites_.end()) throw Error(ErrorCode::UnknownSite, "no security policy for site " + std::string(site));
  return it->second;
}

const SitePolicy& SecurityContext::site_policy(std::string_view site) const { return site_state(site).policy; }
Flavor SecurityContext::site_flavor(std::string_view site) const { return site_state(site).flavor; }
const GridMapfile& SecurityContext::mapfile(std::string_view site) const { return site_state(site).mapfile; }

std::vector<std::string> SecurityContext::sites() const {
  std::vector<std::string> out;
  for (const auto& [id, state] : sites_) out.push_back(id);
  return out;
}

void SecurityContext::regenerate_mapfiles() {
  for (auto& [id, state] : sites_) state.mapfile = mkgridmap(vos_, state.policy);
}

std::string SecurityContext::check_access(std::string_view subject, std::string_view site, SimTime now) const {
  const auto& state = site_state(site);
  const auto& cert = certificate(subject);
  const auto copies = crls_.site_copies(site);
  authenticate(cert, state.flavor, now, copies, cas_);
  return authorize(subject, state.mapfile);
}

}  // namespace worldgrid::auth
