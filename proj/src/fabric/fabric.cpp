// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/fabric/fabric.hpp"

#include <algorithm>
#include <cmath>
#include <fmt/format.h>

#include "worldgrid/common/error.hpp"
#include "worldgrid/infosys/schema.hpp"

namespace worldgrid::fabric {

std::string format_event(const SimEvent& e) {
  return fmt::format("{}\t{}\t{}\t{}", e.t, e.kind, e.subject, e.detail);
}

// ---- EventQueue ------------------------------------------------------------

EventQueue::EventQueue(std::uint64_t seed) : rng_(seed) {}

void EventQueue::schedule_at(SimTime t, Action action) {
  if (t < now_) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot schedule at {} before now {}", t, now_));
  heap_.push(Item{t, next_seq_++, std::move(action)});
}

bool EventQueue::step() {
  if (heap_.empty()) return false;
  // Moving out of top() is safe: the item is popped before anything else
  // touches the heap.
  Item item = std::move(const_cast<Item&>(heap_.top()));
  heap_.pop();
  now_ = item.t;
  item.action();
  return true;
}

void EventQueue::run_until(SimTime until) {
  if (until < now_) throw Error(ErrorCode::InvalidArgument, fmt::format("cannot run back to {} from {}", until, now_));
  while (!heap_.empty() && heap_.top().t <= until) step();
  now_ = until;
}

std::optional<SimTime> EventQueue::next_time() const {
  if (heap_.empty()) return std::nullopt;
  return heap_.top().t;
}

double EventQueue::uniform01() { return static_cast<double>(rng_() >> 11) * 0x1.0p-53; }

// ---- ComputingElementSim ---------------------------------------------------

ComputingElementSim::ComputingElementSim(CeSpec spec) : spec_(std::move(spec)), id_(spec_.id()) {}

bool ComputingElementSim::holds(const std::string& job) const {
  if (running_.contains(job)) return true;
  return std::any_of(queue_.begin(), queue_.end(), [&](const QueuedJob& q) { return q.job == job; });
}

void ComputingElementSim::push(QueuedJob job) {
  if (holds(job.job)) throw Error(ErrorCode::InvalidArgument, "job " + job.job + " already at " + id_);
  queue_.push_back(std::move(job));
  ++counters_.enqueued;
}

std::vector<RunningJob> ComputingElementSim::start_ready(SimTime now) {
  std::vector<RunningJob> started;
  while (!queue_.empty() && free_cpus() > 0) {
    auto q = std::move(queue_.front());
    queue_.pop_front();
    RunningJob r{q.job, now, now + q.duration};
    running_.emplace(q.job, r);
    started.push_back(std::move(r));
  }
  return started;
}

bool ComputingElementSim::finish(const std::string& job) {
  if (running_.erase(job) == 0) return false;
  ++counters_.completed;
  return true;
}

bool ComputingElementSim::remove(const std::string& job) {
  if (running_.erase(job) == 0) {
    const auto it = std::find_if(queue_.begin(), queue_.end(), [&](const QueuedJob& q) { return q.job == job; });
    if (it == queue_.end()) return false;
    queue_.erase(it);
  }
  ++counters_.cancelled;
  return true;
}

// ---- FileSpace -------------------------------------------------------------

void FileSpace::set_capacity(const std::string& location, std::int64_t bytes) { capacity_[location] = bytes; }

std::optional<std::int64_t> FileSpace::capacity(const std::string& location) const {
  const auto it = capacity_.find(location);
  if (it == capacity_.end()) return std::nullopt;
  return it->second;
}

void FileSpace::put(const std::string& location, const std::string& path, std::int64_t size) {
  if (size < 0) throw Error(ErrorCode::InvalidArgument, "negative file size");
  const auto existing = size_of(location, path).value_or(0);
  const auto after = used(location) - existing + size;
  if (const auto cap = capacity(location); cap && after > *cap)
    throw Error(ErrorCode::NoSpace, fmt::format("{} cannot hold {} more bytes", location, size - existing));
  files_[location][path] = size;
  used_[location] = after;
}

std::optional<std::int64_t> FileSpace::size_of(const std::string& location, const std::string& path) const {
  const auto loc = files_.find(location);
  if (loc == files_.end()) return std::nullopt;
  const auto it = loc->second.find(path);
  if (it == loc->second.end()) return std::nullopt;
  return it->second;
}

bool FileSpace::remove(const std::string& location, const std::string& path) {
  const auto loc = files_.find(location);
  if (loc == files_.end()) return false;
  const auto it = loc->second.find(path);
  if (it == loc->second.end()) return false;
  used_[location] -= it->second;
  loc->second.erase(it);
  return true;
}

std::int64_t FileSpace::used(const std::string& location) const {
  const auto it = used_.find(location);
  return it == used_.end() ? 0 : it->second;
}

const std::map<std::string, std::int64_t>& FileSpace::files(const std::string& location) const {
  static const std::map<std::string, std::int64_t> none;
  const auto it = files_.find(location);
  return it == files_.end() ? none : it->second;
}

bool FileSpace::make_directory(const std::string& location, const std::string& path) {
  return dirs_[location].insert(path).second;
}

bool FileSpace::has_directory(const std::string& location, const std::string& path) const {
  const auto it = dirs_.find(location);
  return it != dirs_.end() && it->second.contains(path);
}

// ---- Fabric ----------------------------------------------------------------

Fabric::Fabric(Scenario scenario, std::uint64_t seed) : scenario_(std::move(scenario)), queue_(seed) {
  for (const auto& c : scenario_.ces) {
    ComputingElementSim sim(c);
    const auto id = sim.id();
    ces_.emplace(id, std::move(sim));
  }
  for (const auto& s : scenario_.ses) files_.set_capacity("se:" + s.host, s.bytes);
  for (const auto& f : scenario_.files) files_.put(f.at, f.path, f.size);
  for (const auto& f : scenario_.failures) inject_failure(f);
}

const SiteSpec& Fabric::site(std::string_view id) const {
  if (const auto* s = scenario_.find_site(id)) return *s;
  throw Error(ErrorCode::UnknownSite, "unknown site " + std::string(id));
}

SiteSpec& Fabric::mutable_site(std::string_view id) {
  for (auto& s : scenario_.sites)
    if (s.id == id) return s;
  throw Error(ErrorCode::UnknownSite, "unknown site " + std::string(id));
}

std::vector<std::string> Fabric::ce_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, ce] : ces_) out.push_back(id);
  return out;
}

bool Fabric::has_ce(std::string_view id) const { return ces_.find(id) != ces_.end(); }

const ComputingElementSim& Fabric::ce(std::string_view id) const {
  const auto it = ces_.find(id);
  if (it == ces_.end()) throw Error(ErrorCode::UnknownCe, "unknown CE " + std::string(id));
  return it->second;
}

ComputingElementSim& Fabric::mutable_ce(std::string_view id) {
  const auto it = ces_.find(id);
  if (it == ces_.end()) throw Error(ErrorCode::UnknownCe, "unknown CE " + std::string(id));
  return it->second;
}

bool Fabric::has_se(std::string_view host) const {
  return std::any_of(scenario_.ses.begin(), scenario_.ses.end(), [&](const SeSpec& s) { return s.host == host; });
}

const SeSpec& Fabric::se(std::string_view host) const {
  for (const auto& s : scenario_.ses)
    if (s.host == host) return s;
  throw Error(ErrorCode::UnknownSe, "unknown SE " + std::string(host));
}

std::vector<std::string> Fabric::close_ses(std::string_view ce_id) const {
  const auto& site_id = ce(ce_id).spec().site;
  std::vector<std::string> out;
  for (const auto& s : scenario_.ses)
    if (s.site == site_id) out.push_back(s.host);
  return out;
}

const CentralServiceSpec* Fabric::find_service(std::string_view id) const {
  for (const auto& s : scenario_.services)
    if (s.id == id) return &s;
  return nullptr;
}

const UiSpec* Fabric::find_ui(std::string_view id) const {
  for (const auto& u : scenario_.uis)
    if (u.id == id) return &u;
  return nullptr;
}

void Fabric::inject_failure(FailureSpec failure) {
  if (failure.end <= failure.start) throw Error(ErrorCode::InvalidArgument, "failure window must have end > start");
  if (!has_site(failure.target) && !find_service(failure.target))
    throw Error(ErrorCode::InvalidArgument, "unknown failure target " + failure.target);
  schedule_failure_marks(failure);
  failures_.push_back(std::move(failure));
}

void Fabric::schedule_failure_marks(const FailureSpec& f) {
  const auto subject = f.target;
  const std::string kind(to_string(f.service));
  const auto begin = std::max(f.start, now());
  if (f.end <= now()) return;
  queue_.schedule_at(begin, [this, subject, kind] { emit("failure.begin", subject, kind); });
  queue_.schedule_at(f.end, [this, subject, kind] { emit("failure.end", subject, kind); });
}

bool Fabric::service_up(std::string_view target, ServiceKind kind, SimTime t) const {
  return std::none_of(failures_.begin(), failures_.end(), [&](const FailureSpec& f) {
    return f.target == target && f.service == kind && f.start <= t && t < f.end;
  });
}

void Fabric::set_wn_outbound(std::string_view site_id, bool open) { mutable_site(site_id).wn_outbound = open; }
void Fabric::set_inbound_ports(std::string_view site_id, bool open) { mutable_site(site_id).inbound_ports_open = open; }

SimTime Fabric::draw_duration() {
  const double lo = std::log(static_cast<double>(settings().duration_min));
  const double hi = std::log(static_cast<double>(settings().duration_max));
  const double u = queue_.uniform01();
  const auto d = static_cast<SimTime>(std::llround(std::exp(lo + u * (hi - lo))));
  return std::clamp(d, settings().duration_min, settings().duration_max);
}

SimTime Fabric::enqueue(std::string_view ce_id, const std::string& job, std::optional<SimTime> duration) {
  auto& sim = mutable_ce(ce_id);
  if (!service_up(sim.spec().site, ServiceKind::Gatekeeper))
    throw Error(ErrorCode::GatekeeperDown, "gatekeeper of " + std::string(ce_id) + " is down");
  const SimTime d = duration ? *duration : draw_duration();
  if (d <= 0) throw Error(ErrorCode::InvalidArgument, "job duration must be positive");
  sim.push(QueuedJob{job, d});
  emit("job.enqueue", sim.id(), fmt::format("{} duration={}", job, d));
  schedule_cycle(sim.id());
  return d;
}

void Fabric::schedule_cycle(const std::string& ce_id) {
  if (!cycle_pending_.insert(ce_id).second) return;
  queue_.schedule_at(now(), [this, ce_id] {
    cycle_pending_.erase(ce_id);
    lrm_cycle(ce_id);
  });
}

void Fabric::lrm_cycle(const std::string& ce_id) {
  auto& sim = mutable_ce(ce_id);
  for (const auto& r : sim.start_ready(now())) {
    emit("job.start", ce_id, r.job);
    const auto job = r.job;
    queue_.schedule_at(r.ends, [this, ce_id, job] { complete(ce_id, job); });
    if (hooks_.on_start) hooks_.on_start(ce_id, r.job);
  }
}

void Fabric::complete(const std::string& ce_id, const std::string& job) {
  auto& sim = mutable_ce(ce_id);
  if (!sim.finish(job)) return;  // cancelled while running
  emit("job.complete", ce_id, job);
  if (hooks_.on_complete) hooks_.on_complete(ce_id, job);
  lrm_cycle(ce_id);
}

bool Fabric::cancel(std::string_view ce_id, const std::string& job) {
  auto& sim = mutable_ce(ce_id);
  if (!sim.remove(job)) return false;
  emit("job.cancel", sim.id(), job);
  schedule_cycle(sim.id());
  return true;
}

namespace {

infosys::DistinguishedName site_dn(std::string_view leaf_attr, const std::string& leaf, const std::string& site) {
  return infosys::DistinguishedName({infosys::Rdn(std::string(leaf_attr), leaf), infosys::Rdn("mds-vo-name", site),
                                     infosys::Rdn("o", "grid")});
}

std::string num(std::int64_t v) { return std::to_string(v); }

}  // namespace

std::vector<infosys::DirectoryEntry> Fabric::site_entries(std::string_view site_id) const {
  namespace cls = infosys::classes;
  const auto& s = site(site_id);
  std::vector<infosys::DirectoryEntry> out;
  const auto stamp = now();

  for (const auto& [id, sim] : ces_) {
    const auto& spec = sim.spec();
    if (spec.site != s.id) continue;
    if (!s.brokerable) {
      infosys::DirectoryEntry e{site_dn("mds-hostname", spec.host, s.id), {std::string(cls::kGlobusHost)}, {}, {}, stamp};
      e.attributes["Mds-Hostname"] = {spec.host};
      if (!s.os.empty()) e.attributes["Mds-Os-Name"] = {s.os};
      e.attributes["Mds-Cpu-Total-Count"] = {num(spec.cpus)};
      out.push_back(std::move(e));
      continue;
    }
    infosys::AttributeMap attrs;
    attrs["CEId"] = {id};
    attrs["LRMSType"] = {std::string(to_string(spec.lrms))};
    attrs["TotalCPUs"] = {num(sim.total_cpus())};
    attrs["FreeCPUs"] = {num(sim.free_cpus())};
    attrs["RunningJobs"] = {num(static_cast<std::int64_t>(sim.running().size()))};
    attrs["WaitingJobs"] = {num(static_cast<std::int64_t>(sim.waiting()))};
    attrs["AuthorizedVOs"] = spec.vos;
    if (!spec.tags.empty()) attrs["RunTimeEnvironment"] = spec.tags;
    if (auto close = close_ses(id); !close.empty()) attrs["CloseSEs"] = std::move(close);
    attrs["SiteName"] = {s.id};
    attrs["HostName"] = {spec.host};
    if (spec.vos.empty()) attrs.erase("AuthorizedVOs");
    // AuthorizedVOs is required by the schema; a CE serving nobody
    // publishes an empty marker value instead.
    if (!attrs.contains("AuthorizedVOs")) attrs["AuthorizedVOs"] = {""};
    out.push_back({site_dn("ceid", id, s.id), {std::string(cls::kEdgCe)}, attrs, {}, stamp});
    if (s.glue) {
      auto glue = attrs;
      glue["GlueCEUniqueID"] = {id};
      out.push_back({site_dn("glueceuniqueid", id, s.id), {std::string(cls::kGlueCe)}, std::move(glue), {}, stamp});
    }
  }

  if (!s.brokerable) return out;
  for (const auto& se_spec : scenario_.ses) {
    if (se_spec.site != s.id) continue;
    infosys::AttributeMap attrs;
    attrs["SEId"] = {se_spec.host};
    attrs["TotalBytes"] = {num(se_spec.bytes)};
    attrs["UsedBytes"] = {num(files_.used("se:" + se_spec.host))};
    attrs["Protocols"] = se_spec.protocols;
    attrs["SiteName"] = {s.id};
    attrs["HostName"] = {se_spec.host};
    out.push_back({site_dn("seid", se_spec.host, s.id), {std::string(cls::kEdgSe)}, attrs, {}, stamp});
    if (s.glue) {
      attrs["GlueSEUniqueID"] = {se_spec.host};
      out.push_back({site_dn("glueseuniqueid", se_spec.host, s.id), {std::string(cls::kGlueSe)}, std::move(attrs), {}, stamp});
    }
  }
  return out;
}

std::vector<infosys::DirectoryEntry> Fabric::snapshot_providers() const {
  std::vector<infosys::DirectoryEntry> out;
  for (const auto& s : scenario_.sites) {
    auto part = site_entries(s.id);
    for (auto& e : part) e.source_id = "gris:" + s.id;
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

Endpoint Fabric::endpoint_of_site(std::string_view site_id) const {
  const auto& s = site(site_id);
  return Endpoint{s.id, s.continent};
}

Endpoint Fabric::endpoint_of(std::string_view location) const {
  const auto colon = location.find(':');
  if (colon == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "bad location " + std::string(location));
  const auto kind = location.substr(0, colon);
  const auto where = location.substr(colon + 1);
  if (kind == "wn") return endpoint_of_site(where);
  if (kind == "ce") return endpoint_of_site(ce(where).spec().site);
  if (kind == "se") return endpoint_of_site(se(where).site);
  if (kind == "ui") {
    const auto* ui = find_ui(where);
    if (!ui) throw Error(ErrorCode::InvalidArgument, "unknown UI " + std::string(where));
    return Endpoint{ui->site, ui->continent};
  }
  if (kind == "rb") {
    const auto* svc = find_service(where);
    if (!svc) throw Error(ErrorCode::UnknownBroker, "unknown broker " + std::string(where));
    return Endpoint{svc->site, svc->continent};
  }
  throw Error(ErrorCode::InvalidArgument, "bad location " + std::string(location));
}

double Fabric::bandwidth(const Endpoint& a, const Endpoint& b) const {
  const auto pair_is = [](const LinkSpec& l, std::string_view x, std::string_view y) {
    return (l.a == x && l.b == y) || (l.a == y && l.b == x);
  };
  if (!a.site.empty() && !b.site.empty()) {
    for (const auto& l : scenario_.links)
      if (pair_is(l, a.site, b.site)) return l.mbps;
    if (a.site == b.site) return settings().bandwidth_intra_site;
  }
  for (const auto& l : scenario_.links)
    if (pair_is(l, to_string(a.continent), to_string(b.continent))) return l.mbps;
  return a.continent == b.continent ? settings().bandwidth_same_continent : settings().bandwidth_intercontinental;
}

SimTime Fabric::transfer_time(std::int64_t bytes, const Endpoint& a, const Endpoint& b) const {
  if (bytes <= 0) return 0;
  const double seconds = static_cast<double>(bytes) / (bandwidth(a, b) * 1e6);
  return static_cast<SimTime>(std::ceil(seconds));
}

void Fabric::emit(std::string kind, std::string subject, std::string detail) {
  log_.push_back(SimEvent{now(), log_seq_++, std::move(kind), std::move(subject), std::move(detail)});
}

std::string Fabric::event_log_text() const {
  std::string out;
  for (const auto& e : log_) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

std::vector<SimEvent> Fabric::advance(SimTime until) {
  const auto first = log_.size();
  queue_.run_until(until);
  return {log_.begin() + static_cast<std::ptrdiff_t>(first), log_.end()};
}

}  // namespace worldgrid::fabric
