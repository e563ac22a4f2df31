// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/wms/workload.hpp"

#include <algorithm>
#include <fmt/format.h>

#include "worldgrid/common/error.hpp"

namespace worldgrid::wms {

namespace {

using fabric::ServiceKind;

std::string basename_of(std::string_view path) {
  const auto slash = path.find_last_of('/');
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

jdl::JdlDocument parse_for_submission(std::string_view text) {
  try {
    return jdl::parse_jdl(text);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SyntaxError || e.code() == ErrorCode::DuplicateAttribute)
      throw Error(ErrorCode::ParseError, e.what());
    throw;
  }
}

// OutputData may be a single LFN or a list of them.
std::vector<std::string> output_lfns(const jdl::JdlDocument& doc) {
  const auto* expr = doc.find_extra("OutputData");
  if (!expr) return {};
  const auto self = doc.self_attributes();
  const auto v = jdl::evaluate(*expr, jdl::EvalEnv{nullptr, &self});
  std::vector<std::string> out;
  if (v.is_string()) out.push_back(v.as_string());
  if (v.is_list())
    for (const auto& item : v.as_list())
      if (item.is_string()) out.push_back(item.as_string());
  return out;
}

}  // namespace

WorkloadManager::WorkloadManager(GridServices services) : services_(std::move(services)) {
  services_.fabric.set_hooks({
      [this](const std::string& ce, const std::string& job) { on_start(ce, job); },
      [this](const std::string& ce, const std::string& job) { on_complete(ce, job); },
  });
}

void WorkloadManager::add_broker(BrokerConfig config) {
  if (!config.default_rank) throw Error(ErrorCode::InvalidArgument, "broker " + config.id + " needs a default rank");
  if (!services_.catalogs.contains(config.replica_catalog))
    throw Error(ErrorCode::InvalidArgument, "broker " + config.id + " names unknown catalogue " + config.replica_catalog);
  auto id = config.id;
  brokers_.insert_or_assign(std::move(id), std::move(config));
}

const BrokerConfig& WorkloadManager::broker(std::string_view id) const {
  const auto it = brokers_.find(id);
  if (it == brokers_.end()) throw Error(ErrorCode::UnknownBroker, "unknown broker " + std::string(id));
  return it->second;
}

std::vector<std::string> WorkloadManager::broker_ids() const {
  std::vector<std::string> out;
  for (const auto& [id, b] : brokers_) out.push_back(id);
  return out;
}

const Job& WorkloadManager::job(std::string_view id) const {
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, "unknown job " + std::string(id));
  return it->second;
}

Job& WorkloadManager::mutable_job(std::string_view id) {
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) throw Error(ErrorCode::UnknownJob, "unknown job " + std::string(id));
  return it->second;
}

std::string WorkloadManager::new_job_id() { return fmt::format("job-{:06}", next_id_++); }

void WorkloadManager::record(Job& job, std::optional<JobState> to, Component component, std::string reason) {
  const std::optional<JobState> from = lb_.knows(job.id) ? std::optional<JobState>(job.state) : std::nullopt;
  lb_.append(LbEvent{services_.fabric.now(), job.id, component, from, to, std::move(reason)});
  if (to) {
    job.state = *to;
    if (*to == JobState::Waiting) job.assigned_ce.reset();
  }
}

std::string WorkloadManager::sandbox_location(const Job& job) const {
  return job.direct ? "ui:" + job.ui : "rb:" + job.rb;
}

std::int64_t WorkloadManager::capture_input(const Job& job, std::string_view ui) {
  auto& files = services_.fabric.files();
  const auto ui_loc = "ui:" + std::string(ui);
  std::int64_t total = 0;
  for (const auto& path : job.jdl.input_sandbox) total += *files.size_of(ui_loc, path);
  if (!job.direct)
    for (const auto& path : job.jdl.input_sandbox)
      files.put(sandbox_location(job), job.id + "/in/" + basename_of(path), *files.size_of(ui_loc, path));
  return total;
}

std::string WorkloadManager::submit(std::string_view jdl_text, const std::string& owner, const std::string& rb,
                                    const std::string& ui) {
  auto& fab = services_.fabric;
  auto doc = parse_for_submission(jdl_text);
  const auto& config = broker(rb);
  if (!fab.find_ui(ui)) throw Error(ErrorCode::InvalidArgument, "unknown user interface " + ui);
  if (doc.virtual_organisation.empty())
    throw Error(ErrorCode::VoMembershipError, "job description names no VirtualOrganisation");
  if (!services_.security.is_member(doc.virtual_organisation, owner))
    throw Error(ErrorCode::VoMembershipError, owner + " is not a member of " + doc.virtual_organisation);
  for (const auto& path : doc.input_sandbox)
    if (!fab.files().size_of("ui:" + ui, path))
      throw Error(ErrorCode::SourceMissing, fmt::format("input sandbox file {} is not on {}", path, ui));
  if (!fab.service_up(config.id, ServiceKind::Rb))
    throw Error(ErrorCode::ConnectivityDenied, "resource broker " + config.id + " is unreachable");

  Job job;
  job.id = new_job_id();
  job.owner = owner;
  job.vo = doc.virtual_organisation;
  job.jdl = std::move(doc);
  job.submitted_at = fab.now();
  job.rb = config.id;
  job.ui = ui;
  const auto id = job.id;
  auto& stored = jobs_.emplace(id, std::move(job)).first->second;
  record(stored, JobState::Submitted, Component::UI, "rb=" + stored.rb);

  const auto bytes = capture_input(stored, ui);
  const auto delay = fab.transfer_time(bytes, fab.endpoint_of("ui:" + ui), fab.endpoint_of("rb:" + stored.rb));
  fab.events().schedule_in(delay, [this, id] { arrive_at_rb(id); });
  return id;
}

std::string WorkloadManager::direct_submit(std::string_view jdl_text, const std::string& owner, const std::string& ce,
                                           const std::string& ui) {
  auto& fab = services_.fabric;
  auto doc = parse_for_submission(jdl_text);
  const auto& site = fab.ce(ce).spec().site;
  if (!fab.find_ui(ui)) throw Error(ErrorCode::InvalidArgument, "unknown user interface " + ui);
  for (const auto& path : doc.input_sandbox)
    if (!fab.files().size_of("ui:" + ui, path))
      throw Error(ErrorCode::SourceMissing, fmt::format("input sandbox file {} is not on {}", path, ui));
  services_.security.check_access(owner, site, fab.now());

  Job job;
  job.id = new_job_id();
  job.owner = owner;
  job.vo = doc.virtual_organisation;
  job.jdl = std::move(doc);
  job.submitted_at = fab.now();
  job.ui = ui;
  job.direct = true;
  const auto id = job.id;
  auto& stored = jobs_.emplace(id, std::move(job)).first->second;
  record(stored, JobState::Submitted, Component::UI, "direct ce=" + ce);
  record(stored, JobState::Waiting, Component::UI, "direct");
  record(stored, JobState::Ready, Component::UI, "direct");
  schedule_job(id, ce);
  if (stored.state == JobState::Aborted && !fab.service_up(site, ServiceKind::Gatekeeper))
    throw Error(ErrorCode::GatekeeperDown, fmt::format("gatekeeper of {} is down; {} aborted", ce, id));
  return id;
}

MatchResult WorkloadManager::match_for(const Job& job, std::string* index_used) const {
  const auto& config = broker(job.rb);
  auto& fab = services_.fabric;
  const auto top = services_.info.effective_top(config.info_primary, config.info_backup);
  if (index_used) *index_used = top;
  const auto view = services_.info.view(top, fab.now());
  const auto entries = view.search(candidate_filter(config.glue_aware));
  auto* catalog = services_.catalogs.find(config.replica_catalog)->second;

  MatchRequest request{&job.jdl, job.owner, job.vo, job.tried_ces};
  const AccessCheck access = [&](const infosys::DirectoryEntry& entry) {
    const auto ce = entry.first("CEId");
    if (!ce || !fab.has_ce(*ce)) return false;
    try {
      services_.security.check_access(job.owner, fab.ce(*ce).spec().site, fab.now());
      return true;
    } catch (const Error&) {
      return false;
    }
  };
  const ReplicaCheck replicas = [&](std::span<const std::string> lfns, std::span<const std::string> ses) {
    return catalog->any_replica_on(lfns, ses);
  };
  return rank_candidates(config, request, entries, access, replicas);
}

MatchResult WorkloadManager::match(std::string_view job_id) const {
  const auto& j = job(job_id);
  if (j.state != JobState::Waiting)
    throw Error(ErrorCode::IllegalTransition, fmt::format("{} is {}, not WAITING", j.id, to_string(j.state)));
  return match_for(j, nullptr);
}

void WorkloadManager::arrive_at_rb(const std::string& id) {
  auto& j = mutable_job(id);
  if (j.state != JobState::Submitted) return;
  record(j, JobState::Waiting, Component::RB, "");
  services_.fabric.events().schedule_in(0, [this, id] { run_match(id); });
}

void WorkloadManager::run_match(const std::string& id) {
  auto& j = mutable_job(id);
  if (j.state != JobState::Waiting) return;
  auto& fab = services_.fabric;
  std::string index;
  try {
    const auto result = match_for(j, &index);
    const auto& chosen = result.chosen();
    fab.emit("rb.match", id,
             fmt::format("rb={} index={} ce={} candidates={}", j.rb, index, chosen.ce, result.ranked.size()));
    record(j, JobState::Ready, Component::RB, "ce=" + chosen.ce);
    pending_ce_[id] = chosen.ce;
    fab.events().schedule_in(0, [this, id] {
      const auto it = pending_ce_.find(id);
      if (it == pending_ce_.end()) return;
      const auto ce = it->second;
      pending_ce_.erase(it);
      if (job(id).state == JobState::Ready) schedule_job(id, ce);
    });
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoMatchingResources && e.code() != ErrorCode::AllIndexesDown) throw;
    fab.emit("rb.match", id, fmt::format("rb={} failed={}", j.rb, to_string(e.code())));
    j.reason = e.code() == ErrorCode::NoMatchingResources ? "no matching resources" : "information service unavailable";
    record(j, JobState::Aborted, Component::RB, j.reason);
  }
}

void WorkloadManager::schedule_job(const std::string& id, const std::string& ce) {
  auto& j = mutable_job(id);
  record(j, JobState::Scheduled, Component::JSS, "ce=" + ce);
  j.assigned_ce = ce;
  j.attempts += 1;
  j.tried_ces.insert(ce);
  dispatch(id);
}

void WorkloadManager::dispatch(const std::string& id) {
  auto& j = mutable_job(id);
  auto& fab = services_.fabric;
  const auto ce = *j.assigned_ce;
  const auto& site = fab.ce(ce).spec().site;
  if (!fab.service_up(site, ServiceKind::Gatekeeper)) {
    retry_or_abort(j, "gatekeeper down");
    return;
  }
  if (!fab.service_up(site, ServiceKind::GridFtp)) {
    j.reason = "input sandbox transfer failed";
    record(j, JobState::Aborted, Component::JSS, j.reason);
    return;
  }
  auto& files = fab.files();
  const auto src = j.direct ? "ui:" + j.ui : sandbox_location(j);
  std::int64_t bytes = 0;
  for (const auto& path : j.jdl.input_sandbox) {
    const auto from = j.direct ? path : j.id + "/in/" + basename_of(path);
    const auto size = files.size_of(src, from).value_or(0);
    files.put("ce:" + ce, j.id + "/in/" + basename_of(path), size);
    bytes += size;
  }
  const auto delay = fab.transfer_time(bytes, fab.endpoint_of(src), fab.endpoint_of("ce:" + ce));
  const int attempt = j.attempts;
  fab.events().schedule_in(delay, [this, id, attempt] { arrive_at_ce(id, attempt); });
}

void WorkloadManager::arrive_at_ce(const std::string& id, int attempt) {
  auto& j = mutable_job(id);
  if (j.state != JobState::Scheduled || j.attempts != attempt) return;
  auto& fab = services_.fabric;
  const auto ce = *j.assigned_ce;
  try {
    services_.security.check_access(j.owner, fab.ce(ce).spec().site, fab.now());
  } catch (const Error& e) {
    j.reason = fmt::format("authorization failed: {}", to_string(e.code()));
    record(j, JobState::Aborted, Component::JSS, j.reason);
    return;
  }
  try {
    fab.enqueue(ce, id);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::GatekeeperDown) throw;
    retry_or_abort(j, "gatekeeper down");
  }
}

void WorkloadManager::retry_or_abort(Job& j, const std::string& reason) {
  if (j.direct || j.attempts >= kMaxDispatchAttempts) {
    j.reason = j.direct ? reason : reason + ", retry limit reached";
    record(j, JobState::Aborted, Component::JSS, j.reason);
    return;
  }
  record(j, JobState::Waiting, Component::JSS, reason + ", re-match");
  const auto id = j.id;
  services_.fabric.events().schedule_in(0, [this, id] { run_match(id); });
}

void WorkloadManager::on_start(const std::string& ce, const std::string& id) {
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return;
  auto& j = it->second;
  if (j.state != JobState::Scheduled || j.assigned_ce != ce) return;
  record(j, JobState::Running, Component::CE, "ce=" + ce);
}

void WorkloadManager::on_complete(const std::string& ce, const std::string& id) {
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return;
  auto& j = it->second;
  if (j.state != JobState::Running || j.assigned_ce != ce) return;
  auto& fab = services_.fabric;
  const auto& site = fab.site(fab.ce(ce).spec().site);
  const auto wn = "wn:" + site.id;
  const auto file_bytes = fab.settings().output_sandbox_file_bytes;

  std::vector<OutputFile> produced;
  for (const auto& name : j.jdl.output_sandbox) {
    const auto base = basename_of(name);
    fab.files().put(wn, j.id + "/out/" + base, file_bytes);
    produced.push_back({base, file_bytes});
  }
  // Every result leaves the worker node over the network, so a site without
  // outbound connectivity fails all output staging.
  if (!site.wn_outbound) {
    j.reason = "outbound";
    record(j, JobState::DoneFailed, Component::JSS, j.reason);
    return;
  }

  const auto lfns = output_lfns(j.jdl);
  if (!lfns.empty()) {
    const auto close = fab.close_ses(ce);
    auto* manager = j.direct ? services_.catalogs.begin()->second
                             : services_.catalogs.find(broker(j.rb).replica_catalog)->second;
    try {
      if (close.empty()) throw Error(ErrorCode::UnknownSe, "no storage element close to " + ce);
      for (const auto& text : lfns) {
        const auto lfn = datamgmt::LogicalFileName::parse(text);
        const auto path = j.id + "/data/" + basename_of(lfn.path);
        fab.files().put(wn, path, fab.settings().output_data_bytes);
        manager->copy_and_register(wn, path, close.front(), lfn);
      }
    } catch (const Error& e) {
      j.reason = fmt::format("output data: {}", e.what());
      record(j, JobState::DoneFailed, Component::JSS, j.reason);
      return;
    }
  }

  const auto dest = sandbox_location(j);
  std::int64_t bytes = 0;
  for (const auto& f : produced) {
    fab.files().put(dest, j.id + "/out/" + f.name, f.size);
    bytes += f.size;
  }
  const auto delay = fab.transfer_time(bytes, fab.endpoint_of(wn), fab.endpoint_of(dest));
  fab.events().schedule_in(delay, [this, id, produced] { finish_output(id, produced); });
}

void WorkloadManager::finish_output(const std::string& id, std::vector<OutputFile> files) {
  auto& j = mutable_job(id);
  if (j.state != JobState::Running) return;
  j.output = std::move(files);
  record(j, JobState::DoneOk, Component::JSS, "");
}

bool WorkloadManager::cancel(std::string_view job_id) {
  auto& j = mutable_job(job_id);
  if (is_terminal(j.state)) return false;
  if (j.assigned_ce && services_.fabric.ce(*j.assigned_ce).holds(j.id)) services_.fabric.cancel(*j.assigned_ce, j.id);
  pending_ce_.erase(j.id);
  j.reason = "cancelled by user";
  record(j, JobState::Cancelled, Component::UI, j.reason);
  return true;
}

std::vector<JobSummary> WorkloadManager::jobs(const std::optional<std::string>& owner,
                                              const std::optional<JobState>& state) const {
  std::vector<JobSummary> out;
  for (const auto& [id, j] : jobs_) {
    if (owner && j.owner != *owner) continue;
    if (state && j.state != *state) continue;
    out.push_back(summarize(j));
  }
  return out;
}

std::vector<OutputFile> WorkloadManager::output(std::string_view job_id) const {
  const auto& j = job(job_id);
  if (!is_terminal(j.state)) throw Error(ErrorCode::InvalidArgument, j.id + " has not finished");
  return j.output;
}

bool WorkloadManager::all_terminal() const {
  return std::all_of(jobs_.begin(), jobs_.end(), [](const auto& kv) { return is_terminal(kv.second.state); });
}

RoundRobin::RoundRobin(std::vector<std::string> ces) : ces_(std::move(ces)) {
  if (ces_.empty()) throw Error(ErrorCode::InvalidArgument, "round robin needs at least one CE");
}

const std::string& RoundRobin::next() {
  const auto& ce = ces_[cursor_];
  cursor_ = (cursor_ + 1) % ces_.size();
  return ce;
}

}  // namespace worldgrid::wms
