// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/fabric/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fmt/format.h>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "worldgrid/common/error.hpp"

namespace worldgrid::fabric {

std::string_view to_string(Lrms l) noexcept {
  switch (l) {
    case Lrms::PBS: return "pbs";
    case Lrms::LSF: return "lsf";
    case Lrms::Condor: return "condor";
  }
  return "?";
}

std::string_view to_string(ServiceKind k) noexcept {
  switch (k) {
    case ServiceKind::Gatekeeper: return "gatekeeper";
    case ServiceKind::Gris: return "gris";
    case ServiceKind::GridFtp: return "gridftp";
    case ServiceKind::Rb: return "rb";
    case ServiceKind::Rc: return "rc";
    case ServiceKind::CrlFetch: return "crl";
  }
  return "?";
}

Lrms parse_lrms(std::string_view text) {
  if (iequals(text, "pbs")) return Lrms::PBS;
  if (iequals(text, "lsf")) return Lrms::LSF;
  if (iequals(text, "condor")) return Lrms::Condor;
  throw Error(ErrorCode::InvalidArgument, "unknown LRMS '" + std::string(text) + "'");
}

ServiceKind parse_service_kind(std::string_view text) {
  for (auto k : {ServiceKind::Gatekeeper, ServiceKind::Gris, ServiceKind::GridFtp, ServiceKind::Rb,
                 ServiceKind::Rc, ServiceKind::CrlFetch})
    if (iequals(text, to_string(k))) return k;
  throw Error(ErrorCode::InvalidArgument, "unknown service kind '" + std::string(text) + "'");
}

std::string CeSpec::id() const { return fmt::format("{}:{}/{}-{}", host, port, to_string(lrms), queue); }

const SiteSpec* Scenario::find_site(std::string_view id) const {
  const auto it = std::find_if(sites.begin(), sites.end(), [&](const SiteSpec& s) { return s.id == id; });
  return it == sites.end() ? nullptr : &*it;
}

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw Error(ErrorCode::ScenarioParseError, fmt::format("scenario line {}: {}", line, what));
}

// Fields of one record. Each accessor marks the key as consumed so leftovers
// can be reported as unknown.
class Record {
 public:
  Record(std::string kind, std::size_t line) : kind_(std::move(kind)), line_(line) {}

  void add(std::string key, std::string value) {
    if (fields_.contains(key)) fail(line_, "key '" + key + "' given twice");
    fields_.emplace(std::move(key), std::move(value));
  }

  const std::string& kind() const { return kind_; }
  std::size_t line() const { return line_; }

  std::string str(const std::string& key) {
    auto v = opt(key);
    if (!v) fail(line_, fmt::format("{} record needs '{}'", kind_, key));
    return *v;
  }

  std::optional<std::string> opt(const std::string& key) {
    const auto it = fields_.find(key);
    if (it == fields_.end()) return std::nullopt;
    used_.insert(key);
    return it->second;
  }

  std::string str_or(const std::string& key, std::string fallback) { return opt(key).value_or(std::move(fallback)); }

  std::int64_t integer(const std::string& key, std::optional<std::int64_t> fallback = std::nullopt) {
    const auto v = opt(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(line_, fmt::format("{} record needs '{}'", kind_, key));
    }
    std::int64_t out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) fail(line_, fmt::format("'{}' must be an integer", key));
    return out;
  }

  double real(const std::string& key, std::optional<double> fallback = std::nullopt) {
    const auto v = opt(key);
    if (!v) {
      if (fallback) return *fallback;
      fail(line_, fmt::format("{} record needs '{}'", kind_, key));
    }
    double out = 0;
    const auto res = std::from_chars(v->data(), v->data() + v->size(), out);
    if (res.ec != std::errc{} || res.ptr != v->data() + v->size()) fail(line_, fmt::format("'{}' must be a number", key));
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    const auto v = opt(key);
    if (!v) return fallback;
    if (iequals(*v, "yes") || iequals(*v, "true")) return true;
    if (iequals(*v, "no") || iequals(*v, "false")) return false;
    fail(line_, fmt::format("'{}' must be yes or no", key));
  }

  std::vector<std::string> list(const std::string& key) {
    std::vector<std::string> out;
    const auto v = opt(key);
    if (!v) return out;
    std::string_view rest = *v;
    while (!rest.empty()) {
      const auto comma = rest.find(',');
      const auto item = trim(rest.substr(0, comma));
      if (!item.empty()) out.emplace_back(item);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  template <typename Fn>
  auto convert(const std::string& key, Fn fn) {
    const auto v = str(key);
    try {
      return fn(v);
    } catch (const Error& e) {
      fail(line_, e.what());
    }
  }

  void finish() const {
    for (const auto& [key, value] : fields_)
      if (!used_.contains(key)) fail(line_, fmt::format("unknown key '{}' in {} record", key, kind_));
  }

 private:
  std::string kind_;
  std::size_t line_;
  std::map<std::string, std::string> fields_;
  std::set<std::string> used_;
};

Record tokenize_line(std::string_view line, std::size_t line_no) {
  std::size_t pos = 0;
  const auto skip = [&] {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t')) ++pos;
  };
  skip();
  const auto kind_start = pos;
  while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') ++pos;
  Record rec(std::string(line.substr(kind_start, pos - kind_start)), line_no);
  while (true) {
    skip();
    if (pos >= line.size() || line[pos] == '#') break;
    const auto key_start = pos;
    while (pos < line.size() && line[pos] != '=' && line[pos] != ' ' && line[pos] != '\t') ++pos;
    if (pos >= line.size() || line[pos] != '=') fail(line_no, "expected key=value");
    std::string key(line.substr(key_start, pos - key_start));
    if (key.empty()) fail(line_no, "empty key");
    ++pos;
    std::string value;
    if (pos < line.size() && line[pos] == '"') {
      ++pos;
      while (pos < line.size() && line[pos] != '"') value += line[pos++];
      if (pos >= line.size()) fail(line_no, "unterminated quoted value");
      ++pos;
    } else {
      while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t') value += line[pos++];
    }
    rec.add(std::move(key), std::move(value));
  }
  return rec;
}

class ScenarioBuilder {
 public:
  void apply(Record& r) {
    const auto& k = r.kind();
    if (k == "grid") grid(r);
    else if (k == "site") site(r);
    else if (k == "ce") ce(r);
    else if (k == "se") se(r);
    else if (k == "service") service(r);
    else if (k == "broker") broker(r);
    else if (k == "link") link(r);
    else if (k == "failure") failure(r);
    else if (k == "ca") ca(r);
    else if (k == "revoke") revoke(r);
    else if (k == "vo") vo(r);
    else if (k == "member") member(r);
    else if (k == "cert") cert(r);
    else if (k == "override") override_(r);
    else if (k == "ui") ui(r);
    else if (k == "file") file(r);
    else if (k == "replica") replica(r);
    else fail(r.line(), "unknown record kind '" + k + "'");
    r.finish();
  }

  Scenario finish() {
    // Flavor shape is checked once every CE and SE has been seen.
    for (const auto& s : out_.sites) {
      std::vector<const CeSpec*> ces;
      std::vector<const SeSpec*> ses;
      for (const auto& c : out_.ces)
        if (c.site == s.id) ces.push_back(&c);
      for (const auto& e : out_.ses)
        if (e.site == s.id) ses.push_back(&e);
      const auto line = site_lines_.at(s.id);
      if (ces.empty()) fail(line, "site " + s.id + " has no computing element");
      if (s.flavor == Flavor::EDG) {
        if (ses.empty()) fail(line, "EDG site " + s.id + " needs a storage element");
        for (const auto* c : ces) {
          if (c->wns < 1) fail(line, "EDG site " + s.id + " needs at least one worker node");
          for (const auto* e : ses)
            if (e->host == c->host) fail(line, "EDG site " + s.id + " must run CE and SE on distinct hosts");
        }
      } else {
        for (const auto* e : ses) {
          const bool combined = std::any_of(ces.begin(), ces.end(), [&](const CeSpec* c) { return c->host == e->host; });
          if (!combined) fail(line, "VDT site " + s.id + " must serve CE and SE from its combined server");
        }
      }
    }
    if (!out_.grid.operations_center.empty() && !out_.find_site(out_.grid.operations_center))
      fail(0, "operations_center names unknown site " + out_.grid.operations_center);
    return std::move(out_);
  }

 private:
  void require_site(const Record& r, const std::string& id) const {
    if (!out_.find_site(id)) fail(r.line(), "unknown site '" + id + "'");
  }
  // Hosted components inherit the site's continent; others must say.
  Continent placed_continent(Record& r, const std::string& site) const {
    if (site.empty()) return r.convert("continent", parse_continent);
    require_site(r, site);
    return out_.find_site(site)->continent;
  }
  bool has_se(std::string_view host) const {
    return std::any_of(out_.ses.begin(), out_.ses.end(), [&](const SeSpec& s) { return s.host == host; });
  }
  bool has_service(std::string_view id, std::optional<CentralKind> kind = std::nullopt) const {
    return std::any_of(out_.services.begin(), out_.services.end(),
                       [&](const CentralServiceSpec& s) { return s.id == id && (!kind || s.kind == *kind); });
  }
  bool has_vo(std::string_view name) const {
    return std::any_of(out_.vos.begin(), out_.vos.end(), [&](const VoSpec& v) { return v.name == name; });
  }
  bool has_ca(std::string_view id) const {
    return std::any_of(out_.cas.begin(), out_.cas.end(), [&](const CaSpec& c) { return c.id == id; });
  }
  void claim_host(const Record& r, const std::string& host, const std::string& site) {
    const auto [it, inserted] = hosts_.emplace(host, site);
    if (!inserted && it->second != site) fail(r.line(), "host " + host + " already belongs to site " + it->second);
  }

  void grid(Record& r) {
    auto& g = out_.grid;
    g.name = r.str_or("name", g.name);
    g.duration_min = r.integer("duration_min", g.duration_min);
    g.duration_max = r.integer("duration_max", g.duration_max);
    g.bandwidth_intra_site = r.real("bandwidth_intra_site", g.bandwidth_intra_site);
    g.bandwidth_same_continent = r.real("bandwidth_same_continent", g.bandwidth_same_continent);
    g.bandwidth_intercontinental = r.real("bandwidth_intercontinental", g.bandwidth_intercontinental);
    g.info_refresh = r.integer("info_refresh", g.info_refresh);
    g.registration_ttl = r.integer("registration_ttl", g.registration_ttl);
    g.probe_period = r.integer("probe_period", g.probe_period);
    g.probe_timeout = r.integer("probe_timeout", g.probe_timeout);
    g.crl_refresh = r.integer("crl_refresh", g.crl_refresh);
    g.output_sandbox_file_bytes = r.integer("output_sandbox_file_bytes", g.output_sandbox_file_bytes);
    g.output_data_bytes = r.integer("output_data_bytes", g.output_data_bytes);
    g.operations_center = r.str_or("operations_center", g.operations_center);
    if (g.duration_min <= 0 || g.duration_max < g.duration_min) fail(r.line(), "need 0 < duration_min <= duration_max");
    if (g.info_refresh <= 0 || g.registration_ttl <= 0 || g.probe_period <= 0 || g.crl_refresh <= 0)
      fail(r.line(), "periods must be positive");
  }

  void site(Record& r) {
    SiteSpec s;
    s.id = r.str("id");
    if (out_.find_site(s.id)) fail(r.line(), "duplicate site id '" + s.id + "'");
    s.country = r.str("country");
    s.continent = r.convert("continent", parse_continent);
    s.lat = r.real("lat");
    s.lon = r.real("lon");
    s.flavor = r.convert("flavor", parse_flavor);
    s.os = r.str_or("os", "");
    s.glue = r.boolean("glue", false);
    s.brokerable = r.boolean("brokerable", true);
    s.wn_outbound = r.boolean("wn_outbound", true);
    s.inbound_ports_open = r.boolean("inbound", true);
    s.kerberos = r.boolean("kerberos", false);
    if (s.lat < -90 || s.lat > 90 || s.lon < -180 || s.lon > 180) fail(r.line(), "coordinates out of range");
    site_lines_[s.id] = r.line();
    out_.sites.push_back(std::move(s));
  }

  void ce(Record& r) {
    CeSpec c;
    c.site = r.str("site");
    require_site(r, c.site);
    c.host = r.str("host");
    c.port = static_cast<int>(r.integer("port", 2119));
    c.lrms = r.convert("lrms", parse_lrms);
    c.queue = r.str_or("queue", "long");
    c.cpus = static_cast<int>(r.integer("cpus"));
    c.wns = static_cast<int>(r.integer("wns", 1));
    c.vos = r.list("vos");
    c.tags = r.list("tags");
    if (c.cpus < 1) fail(r.line(), "cpus must be positive");
    for (const auto& v : c.vos)
      if (!has_vo(v)) fail(r.line(), "unknown VO '" + v + "'");
    for (const auto& other : out_.ces)
      if (other.id() == c.id()) fail(r.line(), "duplicate CE " + c.id());
    claim_host(r, c.host, c.site);
    out_.ces.push_back(std::move(c));
  }

  void se(Record& r) {
    SeSpec s;
    s.site = r.str("site");
    require_site(r, s.site);
    s.host = r.str("host");
    s.bytes = r.integer("bytes");
    auto protocols = r.list("protocols");
    if (!protocols.empty()) s.protocols = std::move(protocols);
    if (s.bytes < 0) fail(r.line(), "bytes must be >= 0");
    if (has_se(s.host)) fail(r.line(), "duplicate SE " + s.host);
    claim_host(r, s.host, s.site);
    out_.ses.push_back(std::move(s));
  }

  void service(Record& r) {
    CentralServiceSpec s;
    s.id = r.str("id");
    if (has_service(s.id) || out_.find_site(s.id)) fail(r.line(), "duplicate service id '" + s.id + "'");
    const auto kind = r.str("kind");
    if (kind == "rb") s.kind = CentralKind::Rb;
    else if (kind == "ii") s.kind = CentralKind::Ii;
    else if (kind == "rc") s.kind = CentralKind::Rc;
    else fail(r.line(), "service kind must be rb, ii or rc");
    s.location = r.str("location");
    s.site = r.str_or("site", "");
    s.continent = placed_continent(r, s.site);
    if (const auto* host = out_.find_site(s.site)) {
      s.lat = host->lat;
      s.lon = host->lon;
    } else {
      s.lat = r.real("lat", 0.0);
      s.lon = r.real("lon", 0.0);
    }
    s.backup_of = r.str_or("backup_of", "");
    if (!s.backup_of.empty() && !has_service(s.backup_of, s.kind))
      fail(r.line(), "backup_of must name an earlier service of the same kind");
    out_.services.push_back(std::move(s));
  }

  void broker(Record& r) {
    BrokerSpec b;
    b.id = r.str("id");
    if (!has_service(b.id, CentralKind::Rb)) fail(r.line(), "broker '" + b.id + "' needs a matching rb service");
    for (const auto& other : out_.brokers)
      if (other.id == b.id) fail(r.line(), "duplicate broker " + b.id);
    b.info_primary = r.str("info_primary");
    b.info_backup = r.str("info_backup");
    b.replica_catalog = r.str("rc");
    if (!has_service(b.info_primary, CentralKind::Ii) || !has_service(b.info_backup, CentralKind::Ii))
      fail(r.line(), "broker info indexes must be ii services");
    if (!has_service(b.replica_catalog, CentralKind::Rc)) fail(r.line(), "broker rc must be an rc service");
    b.glue_aware = r.boolean("glue_aware", false);
    b.strict_data = r.boolean("strict_data", false);
    b.default_rank = r.str_or("default_rank", b.default_rank);
    out_.brokers.push_back(std::move(b));
  }

  void link(Record& r) {
    LinkSpec l{r.str("a"), r.str("b"), r.real("mbps")};
    if (l.mbps <= 0) fail(r.line(), "mbps must be positive");
    for (const auto& end : {l.a, l.b})
      if (!out_.find_site(end) && end != "EU" && end != "US") fail(r.line(), "link end '" + end + "' is not a site or continent");
    out_.links.push_back(std::move(l));
  }

  void failure(Record& r) {
    FailureSpec f;
    f.target = r.str("target");
    if (!out_.find_site(f.target) && !has_service(f.target)) fail(r.line(), "unknown failure target '" + f.target + "'");
    f.service = r.convert("service", parse_service_kind);
    f.start = r.integer("start");
    f.end = r.integer("end");
    if (f.end <= f.start) fail(r.line(), "failure window must have end > start");
    out_.failures.push_back(std::move(f));
  }

  void ca(Record& r) {
    CaSpec c;
    c.id = r.str("id");
    if (has_ca(c.id)) fail(r.line(), "duplicate CA " + c.id);
    for (const auto& f : r.list("trusted_by")) {
      try {
        c.trusted_by.push_back(parse_flavor(f));
      } catch (const Error& e) {
        fail(r.line(), e.what());
      }
    }
    c.crl_period = r.integer("crl_period", c.crl_period);
    c.crl_validity = r.integer("crl_validity", c.crl_validity);
    if (c.crl_period <= 0 || c.crl_validity <= 0) fail(r.line(), "CRL period and validity must be positive");
    out_.cas.push_back(std::move(c));
  }

  void revoke(Record& r) {
    RevocationSpec v{r.str("ca"), r.integer("serial"), r.integer("at", 0)};
    if (!has_ca(v.ca)) fail(r.line(), "unknown CA '" + v.ca + "'");
    out_.revocations.push_back(std::move(v));
  }

  void vo(Record& r) {
    VoSpec v{r.str("name"), r.str_or("server", "")};
    if (has_vo(v.name)) fail(r.line(), "duplicate VO " + v.name);
    out_.vos.push_back(std::move(v));
  }

  void member(Record& r) {
    MemberSpec m{r.str("vo"), r.str("subject"), r.boolean("signed", true)};
    if (!has_vo(m.vo)) fail(r.line(), "unknown VO '" + m.vo + "'");
    out_.members.push_back(std::move(m));
  }

  void cert(Record& r) {
    CertSpec c{r.str("subject"), r.str("ca"), r.integer("serial"), r.integer("not_before", 0), r.integer("not_after")};
    if (!has_ca(c.ca)) fail(r.line(), "unknown CA '" + c.ca + "'");
    if (c.not_before >= c.not_after) fail(r.line(), "certificate needs not_before < not_after");
    for (const auto& other : out_.certs)
      if (other.subject == c.subject) fail(r.line(), "duplicate certificate for " + c.subject);
    out_.certs.push_back(std::move(c));
  }

  void override_(Record& r) {
    OverrideSpec o;
    o.site = r.str("site");
    require_site(r, o.site);
    o.subject = r.str("subject");
    const auto account = r.str("account");
    if (account != "DENY") o.account = account;
    out_.overrides.push_back(std::move(o));
  }

  void ui(Record& r) {
    UiSpec u{r.str("id"), r.str("location"), r.str_or("site", "")};
    u.continent = placed_continent(r, u.site);
    for (const auto& other : out_.uis)
      if (other.id == u.id) fail(r.line(), "duplicate UI " + u.id);
    out_.uis.push_back(std::move(u));
  }

  void file(Record& r) {
    FileSpec f{r.str("at"), r.str("path"), r.integer("size")};
    const auto colon = f.at.find(':');
    if (colon == std::string::npos) fail(r.line(), "file location must be ui:, wn:, ce: or se:");
    const auto kind = f.at.substr(0, colon);
    const auto where = f.at.substr(colon + 1);
    bool ok = false;
    if (kind == "ui") ok = std::any_of(out_.uis.begin(), out_.uis.end(), [&](const UiSpec& u) { return u.id == where; });
    else if (kind == "wn") ok = out_.find_site(where) != nullptr;
    else if (kind == "ce") ok = std::any_of(out_.ces.begin(), out_.ces.end(), [&](const CeSpec& c) { return c.id() == where; });
    else if (kind == "se") ok = has_se(where);
    if (!ok) fail(r.line(), "unknown file location '" + f.at + "'");
    if (f.size < 0 || f.path.empty()) fail(r.line(), "file needs a path and size >= 0");
    out_.files.push_back(std::move(f));
  }

  void replica(Record& r) {
    ReplicaSpec p{r.str("lfn"), r.str("se"), r.integer("size")};
    if (!has_se(p.se)) fail(r.line(), "unknown SE '" + p.se + "'");
    if (p.size < 0) fail(r.line(), "size must be >= 0");
    out_.replicas.push_back(std::move(p));
  }

  Scenario out_;
  std::map<std::string, std::size_t> site_lines_;
  std::map<std::string, std::string> hosts_;
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  ScenarioBuilder builder;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    auto rec = tokenize_line(t, line_no);
    builder.apply(rec);
  }
  return builder.finish();
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ScenarioParseError, "cannot open scenario file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

}  // namespace worldgrid::fabric
