// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "worldgrid/wms/job.hpp"

#include <charconv>
#include <fmt/format.h>

#include "worldgrid/common/error.hpp"

namespace worldgrid::wms {

std::string_view to_string(JobState s) noexcept {
  switch (s) {
    case JobState::Submitted: return "SUBMITTED";
    case JobState::Waiting: return "WAITING";
    case JobState::Ready: return "READY";
    case JobState::Scheduled: return "SCHEDULED";
    case JobState::Running: return "RUNNING";
    case JobState::DoneOk: return "DONE_OK";
    case JobState::DoneFailed: return "DONE_FAILED";
    case JobState::Aborted: return "ABORTED";
    case JobState::Cancelled: return "CANCELLED";
  }
  return "?";
}

JobState parse_job_state(std::string_view text) {
  for (auto s : kAllStates)
    if (iequals(text, to_string(s))) return s;
  throw Error(ErrorCode::InvalidArgument, "unknown job state '" + std::string(text) + "'");
}

bool is_terminal(JobState s) noexcept {
  return s == JobState::DoneOk || s == JobState::DoneFailed || s == JobState::Aborted || s == JobState::Cancelled;
}

bool transition_allowed(std::optional<JobState> from, JobState to) noexcept {
  using S = JobState;
  if (!from) return to == S::Submitted;
  if (is_terminal(*from)) return false;
  if (to == S::Cancelled) return true;
  switch (*from) {
    case S::Submitted: return to == S::Waiting;
    case S::Waiting: return to == S::Ready || to == S::Aborted;
    case S::Ready: return to == S::Scheduled || to == S::Aborted;
    case S::Scheduled: return to == S::Running || to == S::Aborted || to == S::Waiting;
    case S::Running: return to == S::DoneOk || to == S::DoneFailed;
    default: return false;
  }
}

std::string_view to_string(Component c) noexcept {
  switch (c) {
    case Component::UI: return "UI";
    case Component::RB: return "RB";
    case Component::JSS: return "JSS";
    case Component::CE: return "CE";
  }
  return "?";
}

Component parse_component(std::string_view text) {
  for (auto c : {Component::UI, Component::RB, Component::JSS, Component::CE})
    if (text == to_string(c)) return c;
  throw Error(ErrorCode::InvalidArgument, "unknown component '" + std::string(text) + "'");
}

std::string format_lb_event(const LbEvent& e) {
  const auto state = [](const std::optional<JobState>& s) { return s ? std::string(to_string(*s)) : std::string("-"); };
  return fmt::format("{}\t{}\t{}\t{}\t{}\t{}", e.t, e.job, to_string(e.component), state(e.from), state(e.to), e.reason);
}

LbEvent parse_lb_line(std::string_view line) {
  std::vector<std::string_view> cols;
  for (int i = 0; i < 5; ++i) {
    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw Error(ErrorCode::InvalidArgument, "LB line needs six columns");
    cols.push_back(line.substr(0, tab));
    line.remove_prefix(tab + 1);
  }
  cols.push_back(line);
  LbEvent e;
  const auto res = std::from_chars(cols[0].data(), cols[0].data() + cols[0].size(), e.t);
  if (res.ec != std::errc{} || res.ptr != cols[0].data() + cols[0].size())
    throw Error(ErrorCode::InvalidArgument, "LB line has a bad time");
  e.job = std::string(cols[1]);
  e.component = parse_component(cols[2]);
  if (cols[3] != "-") e.from = parse_job_state(cols[3]);
  if (cols[4] != "-") e.to = parse_job_state(cols[4]);
  e.reason = std::string(cols[5]);
  return e;
}

namespace {

// Checks one event against the replayed tail and advances it.
void apply(std::optional<JobState>& state, SimTime& last_t, bool& started, const LbEvent& e) {
  if (started && e.t < last_t)
    throw Error(ErrorCode::IllegalTransition, fmt::format("{}: event at {} precedes {}", e.job, e.t, last_t));
  if (e.is_transition()) {
    if (e.from != state)
      throw Error(ErrorCode::IllegalTransition,
                  fmt::format("{}: event claims {} but the job is {}", e.job,
                              e.from ? to_string(*e.from) : "-", state ? to_string(*state) : "-"));
    if (!transition_allowed(state, *e.to))
      throw Error(ErrorCode::IllegalTransition, fmt::format("{}: {} -> {} is not allowed", e.job,
                                                            state ? to_string(*state) : "-", to_string(*e.to)));
    state = e.to;
  } else if (!state) {
    throw Error(ErrorCode::IllegalTransition, e.job + ": informational event before creation");
  }
  last_t = e.t;
  started = true;
}

}  // namespace

std::optional<JobState> replay(const std::vector<LbEvent>& events) {
  std::optional<JobState> state;
  SimTime last_t = 0;
  bool started = false;
  for (const auto& e : events) apply(state, last_t, started, e);
  return state;
}

void LbStore::append(LbEvent e) {
  auto [it, fresh] = state_.try_emplace(e.job);
  auto tail = it->second;
  bool started = !fresh;
  try {
    apply(tail.state, tail.last_t, started, e);
  } catch (...) {
    if (fresh) state_.erase(it);
    throw;
  }
  it->second = tail;
  by_job_[e.job].push_back(log_.size());
  log_.push_back(std::move(e));
}

std::vector<LbEvent> LbStore::events_of(std::string_view job) const {
  const auto it = by_job_.find(job);
  if (it == by_job_.end()) throw Error(ErrorCode::UnknownJob, "unknown job " + std::string(job));
  std::vector<LbEvent> out;
  for (auto i : it->second) out.push_back(log_[i]);
  return out;
}

std::optional<JobState> LbStore::state_of(std::string_view job) const {
  const auto it = state_.find(job);
  if (it == state_.end()) return std::nullopt;
  return it->second.state;
}

std::string LbStore::export_text() const {
  std::string out;
  for (const auto& e : log_) {
    out += format_lb_event(e);
    out += '\n';
  }
  return out;
}

JobSummary summarize(const Job& job) {
  return {job.id, job.owner, job.vo, job.state, job.assigned_ce, job.submitted_at, job.rb, job.reason};
}

}  // namespace worldgrid::wms
