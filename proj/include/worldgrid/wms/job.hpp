// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "worldgrid/common/types.hpp"
#include "worldgrid/jdl/document.hpp"

namespace worldgrid::wms {

enum class JobState { Submitted, Waiting, Ready, Scheduled, Running, DoneOk, DoneFailed, Aborted, Cancelled };

inline constexpr JobState kAllStates[] = {JobState::Submitted, JobState::Waiting,    JobState::Ready,
                                          JobState::Scheduled, JobState::Running,    JobState::DoneOk,
                                          JobState::DoneFailed, JobState::Aborted,   JobState::Cancelled};

std::string_view to_string(JobState s) noexcept;
JobState parse_job_state(std::string_view text);  // InvalidArgument
bool is_terminal(JobState s) noexcept;

// The lifecycle relation. `from` is empty for job creation, which may only
// produce SUBMITTED. SCHEDULED -> WAITING is the gatekeeper re-match edge.
bool transition_allowed(std::optional<JobState> from, JobState to) noexcept;

enum class Component { UI, RB, JSS, CE };
std::string_view to_string(Component c) noexcept;
Component parse_component(std::string_view text);

// A state change, or an informational record when `to` is empty.
struct LbEvent {
  SimTime t = 0;
  std::string job;
  Component component = Component::UI;
  std::optional<JobState> from;
  std::optional<JobState> to;
  std::string reason;

  bool is_transition() const noexcept { return to.has_value(); }
  bool operator==(const LbEvent&) const = default;
};

// `t<TAB>job<TAB>component<TAB>from<TAB>to<TAB>reason`, '-' for absent states.
std::string format_lb_event(const LbEvent& e);
LbEvent parse_lb_line(std::string_view line);

// Replays transitions from nothing. Throws IllegalTransition on a step the
// lifecycle does not allow or when time goes backwards.
std::optional<JobState> replay(const std::vector<LbEvent>& events);

// Append-only logging and bookkeeping store.
class LbStore {
 public:
  // Validates against the job's replayed state. Throws IllegalTransition.
  void append(LbEvent e);

  const std::vector<LbEvent>& all() const noexcept { return log_; }
  std::vector<LbEvent> events_of(std::string_view job) const;  // UnknownJob
  std::optional<JobState> state_of(std::string_view job) const;
  bool knows(std::string_view job) const { return state_.find(job) != state_.end(); }

  std::string export_text() const;

 private:
  struct Tail {
    std::optional<JobState> state;
    SimTime last_t = 0;
  };
  std::vector<LbEvent> log_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_job_;
  std::map<std::string, Tail, std::less<>> state_;
};

struct OutputFile {
  std::string name;
  std::int64_t size = 0;
  bool operator==(const OutputFile&) const = default;
};

struct Job {
  std::string id;
  std::string owner;
  std::string vo;
  jdl::JdlDocument jdl;
  JobState state = JobState::Submitted;
  std::optional<std::string> assigned_ce;
  SimTime submitted_at = 0;
  std::string rb;  // empty for direct submissions
  std::string ui;
  bool direct = false;
  int attempts = 0;
  std::set<std::string> tried_ces;
  std::string reason;  // why the job ended where it did
  std::vector<OutputFile> output;
};

struct JobSummary {
  std::string id;
  std::string owner;
  std::string vo;
  JobState state = JobState::Submitted;
  std::optional<std::string> assigned_ce;
  SimTime submitted_at = 0;
  std::string rb;
  std::string reason;
};

JobSummary summarize(const Job& job);

}  // namespace worldgrid::wms
