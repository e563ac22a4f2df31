// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/auth/auth.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "worldgrid/common/error.hpp"

namespace worldgrid::auth {

void CertificateRecord::validate() const {
  if (subject.empty()) throw Error(ErrorCode::InvalidArgument, "certificate without subject");
  if (!(not_before < not_after))
    throw Error(ErrorCode::InvalidArgument, "certificate for " + subject + " has not_before >= not_after");
}

void CaRegistry::trust(std::string ca, Flavor flavor) {
  (flavor == Flavor::EDG ? edg_ : vdt_).insert(std::move(ca));
}

bool CaRegistry::trusts(std::string_view ca, Flavor flavor) const {
  return trusted(flavor).contains(ca);
}

const std::set<std::string, std::less<>>& CaRegistry::trusted(Flavor flavor) const {
  return flavor == Flavor::EDG ? edg_ : vdt_;
}

CaRegistry CaRegistry::worldgrid_default(std::span<const std::string> edg_cas) {
  CaRegistry reg;
  for (const auto& ca : edg_cas) {
    reg.trust(ca, Flavor::EDG);
    reg.trust(ca, Flavor::VDT);
  }
  reg.trust("doe", Flavor::EDG);
  reg.trust("doe", Flavor::VDT);
  reg.trust("globus", Flavor::VDT);
  return reg;
}

CertificationAuthority::CertificationAuthority(std::string id, SimTime period, SimTime validity)
    : id_(std::move(id)), period_(period), validity_(validity) {
  if (period_ <= 0 || validity_ <= 0)
    throw Error(ErrorCode::InvalidArgument, "CA " + id_ + " needs positive CRL period and validity");
}

void CertificationAuthority::revoke(std::int64_t serial, SimTime at) {
  const auto [it, inserted] = revoked_.emplace(serial, at);
  if (!inserted) it->second = std::min(it->second, at);
}

Crl CertificationAuthority::current_crl(SimTime now) const {
  Crl crl;
  crl.ca = id_;
  crl.issued_at = now < 0 ? 0 : (now / period_) * period_;
  crl.next_update = crl.issued_at + validity_;
  for (const auto& [serial, at] : revoked_)
    if (at <= crl.issued_at) crl.revoked_serials.insert(serial);
  return crl;
}

std::string authenticate(const CertificateRecord& cert, Flavor flavor, SimTime now, std::span<const Crl> crls,
                         const CaRegistry& cas) {
  if (!cas.trusts(cert.issuer_ca, flavor))
    throw Error(ErrorCode::UntrustedCa,
                fmt::format("CA '{}' is not trusted by {} sites", cert.issuer_ca, to_string(flavor)));
  if (now < cert.not_before || now > cert.not_after)
    throw Error(ErrorCode::Expired, fmt::format("certificate of {} not valid at t={}", cert.subject, now));
  const auto crl = std::find_if(crls.begin(), crls.end(), [&](const Crl& c) { return c.ca == cert.issuer_ca; });
  if (crl != crls.end() && crl->lists(cert.serial))
    throw Error(ErrorCode::Revoked, fmt::format("serial {} of {} is revoked", cert.serial, cert.issuer_ca));
  if (crl == crls.end() || !crl->fresh_at(now))
    throw Error(ErrorCode::StaleCrl, fmt::format("no fresh CRL for CA '{}' at t={}", cert.issuer_ca, now));
  return cert.subject;
}

void VoRegistry::add_member(std::string subject, bool signed_policy) {
  if (subject.empty()) throw Error(ErrorCode::InvalidArgument, "empty subject");
  if (!is_member(subject)) members.push_back(subject);
  if (signed_policy) usage_policy_signed.insert(std::move(subject));
  else usage_policy_signed.erase(subject);
}

bool VoRegistry::remove_member(std::string_view subject) {
  const auto it = std::find(members.begin(), members.end(), subject);
  if (it == members.end()) return false;
  members.erase(it);
  usage_policy_signed.erase(std::string(subject));
  return true;
}

bool VoRegistry::is_member(std::string_view subject) const {
  return std::find(members.begin(), members.end(), subject) != members.end();
}

std::vector<VoRegistry> parse_vo_file(std::string_view text) {
  std::vector<VoRegistry> vos;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']' || !line.starts_with("[vo "))
        throw Error(ErrorCode::InvalidArgument, fmt::format("vo file line {}: bad section header", line_no));
      const auto name = trim(line.substr(4, line.size() - 5));
      if (name.empty()) throw Error(ErrorCode::InvalidArgument, fmt::format("vo file line {}: empty VO name", line_no));
      vos.push_back(VoRegistry{std::string(name), {}, {}});
      continue;
    }
    if (vos.empty()) throw Error(ErrorCode::InvalidArgument, fmt::format("vo file line {}: member outside a section", line_no));
    if (line.front() == '?') vos.back().add_member(std::string(trim(line.substr(1))), false);
    else vos.back().add_member(std::string(line), true);
  }
  return vos;
}

std::string write_vo_file(std::span<const VoRegistry> vos) {
  std::string out;
  for (const auto& vo : vos) {
    out += "[vo " + vo.name + "]\n";
    for (const auto& m : vo.members) out += (vo.has_signed(m) ? "" : "?") + m + "\n";
  }
  return out;
}

GridMapfile::GridMapfile(std::vector<Mapping> mappings) : mappings_(std::move(mappings)) {
  std::set<std::string_view> seen;
  for (const auto& m : mappings_)
    if (!seen.insert(m.subject).second)
      throw Error(ErrorCode::InvalidArgument, "grid-mapfile maps " + m.subject + " twice");
}

std::optional<std::string> GridMapfile::account_for(std::string_view subject) const {
  const auto it = std::find_if(mappings_.begin(), mappings_.end(), [&](const Mapping& m) { return m.subject == subject; });
  if (it == mappings_.end()) return std::nullopt;
  return it->account;
}

std::string GridMapfile::serialize() const {
  std::string out;
  for (const auto& m : mappings_) out += "\"" + m.subject + "\" " + m.account + "\n";
  return out;
}

GridMapfile GridMapfile::parse(std::string_view text) {
  std::vector<Mapping> mappings;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const auto line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const auto close = line.find('"', 1);
    if (line.front() != '"' || close == std::string_view::npos)
      throw Error(ErrorCode::InvalidArgument, fmt::format("grid-mapfile line {}: subject must be quoted", line_no));
    const auto account = trim(line.substr(close + 1));
    if (account.empty()) throw Error(ErrorCode::InvalidArgument, fmt::format("grid-mapfile line {}: missing account", line_no));
    mappings.push_back({std::string(line.substr(1, close - 1)), std::string(account)});
  }
  return GridMapfile(std::move(mappings));
}

std::string pool_account(std::string_view vo, std::size_t index) {
  return fmt::format("{}{:03}", vo, index + 1);
}

GridMapfile mkgridmap(std::span<const VoRegistry> vos, const SitePolicy& policy) {
  std::set<std::string_view> names;
  for (const auto& vo : vos)
    if (!names.insert(vo.name).second) throw Error(ErrorCode::InvalidArgument, "duplicate VO " + vo.name);
  for (const auto& s : policy.supported_vos)
    if (!names.contains(s)) throw Error(ErrorCode::UnknownVo, "site policy names unknown VO " + s);

  std::vector<Mapping> mappings;
  std::set<std::string> mapped;
  for (const auto& vo : vos) {
    if (std::find(policy.supported_vos.begin(), policy.supported_vos.end(), vo.name) == policy.supported_vos.end())
      continue;
    for (std::size_t i = 0; i < vo.members.size(); ++i) {
      const auto& subject = vo.members[i];
      if (!vo.has_signed(subject) || mapped.contains(subject)) continue;
      mapped.insert(subject);
      mappings.push_back({subject, pool_account(vo.name, i)});
    }
  }
  for (const auto& ov : policy.overrides) {
    const auto it = std::find_if(mappings.begin(), mappings.end(), [&](const Mapping& m) { return m.subject == ov.subject; });
    if (!ov.account) {
      if (it != mappings.end()) mappings.erase(it);
    } else if (it != mappings.end()) {
      it->account = *ov.account;
    } else {
      mappings.push_back({ov.subject, *ov.account});
    }
  }
  return GridMapfile(std::move(mappings));
}

std::string authorize(std::string_view subject, const GridMapfile& mapfile) {
  if (auto account = mapfile.account_for(subject)) return *account;
  throw Error(ErrorCode::NotAuthorized, "subject " + std::string(subject) + " is not in the grid-mapfile");
}

void CrlDistribution::add_ca(CertificationAuthority ca) {
  const auto id = ca.id();
  cas_.insert_or_assign(id, std::move(ca));
}

void CrlDistribution::add_site(std::string site) { copies_.try_emplace(std::move(site)); }

CertificationAuthority& CrlDistribution::ca(std::string_view id) {
  const auto it = cas_.find(id);
  if (it == cas_.end()) throw Error(ErrorCode::InvalidArgument, "unknown CA " + std::string(id));
  return it->second;
}

std::vector<CrlDistribution::Outcome> CrlDistribution::refresh(SimTime now, const FetchPolicy& fetch_ok) {
  std::vector<Outcome> out;
  for (auto& [site, copies] : copies_) {
    for (const auto& [id, ca] : cas_) {
      const bool ok = !fetch_ok || fetch_ok(site, id);
      if (ok) copies[id] = ca.current_crl(now);
      out.push_back({site, id, ok});
    }
  }
  return out;
}

std::vector<Crl> CrlDistribution::site_copies(std::string_view site) const {
  std::vector<Crl> out;
  const auto it = copies_.find(site);
  if (it == copies_.end()) return out;
  for (const auto& [id, crl] : it->second) out.push_back(crl);
  return out;
}

bool CrlDistribution::site_has_stale(std::string_view site, SimTime now) const {
  const auto it = copies_.find(site);
  if (it == copies_.end()) return false;
  if (it->second.size() < cas_.size()) return true;
  return std::any_of(it->second.begin(), it->second.end(), [&](const auto& kv) { return !kv.second.fresh_at(now); });
}

}  // namespace worldgrid::auth
