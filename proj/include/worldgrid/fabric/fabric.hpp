// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "worldgrid/fabric/scenario.hpp"
#include "worldgrid/infosys/entry.hpp"

namespace worldgrid::fabric {

// One line of the simulation event log.
struct SimEvent {
  SimTime t = 0;
  std::uint64_t seq = 0;
  std::string kind;
  std::string subject;
  std::string detail;

  bool operator==(const SimEvent&) const = default;
};

// "t<TAB>kind<TAB>subject<TAB>detail"
std::string format_event(const SimEvent& e);

// Virtual-time scheduler. Actions run in (t, insertion order); the seeded
// generator lives here so that every random draw is ordered by the same
// event sequence.
class EventQueue {
 public:
  using Action = std::function<void()>;

  explicit EventQueue(std::uint64_t seed);

  SimTime now() const noexcept { return now_; }
  // Throws InvalidArgument when t lies in the past.
  void schedule_at(SimTime t, Action action);
  void schedule_in(SimTime delay, Action action) { schedule_at(now_ + delay, std::move(action)); }

  // Runs the earliest pending action. False when nothing is pending.
  bool step();
  // Runs everything with t <= until, then sets the clock to until.
  void run_until(SimTime until);

  bool empty() const noexcept { return heap_.empty(); }
  std::optional<SimTime> next_time() const;
  std::size_t pending() const noexcept { return heap_.size(); }

  std::uint64_t next_random() { return rng_(); }
  // Uniform in [0, 1) from the top 53 bits of one draw.
  double uniform01();

 private:
  struct Item {
    SimTime t;
    std::uint64_t seq;
    Action action;
  };
  struct Later {
    bool operator()(const Item& a, const Item& b) const noexcept {
      return a.t != b.t ? a.t > b.t : a.seq > b.seq;
    }
  };

  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::priority_queue<Item, std::vector<Item>, Later> heap_;
  std::mt19937_64 rng_;
};

struct QueuedJob {
  std::string job;
  SimTime duration = 0;
};

struct RunningJob {
  std::string job;
  SimTime started = 0;
  SimTime ends = 0;
};

// A CE mapped onto one FIFO batch queue.
class ComputingElementSim {
 public:
  struct Counters {
    std::size_t enqueued = 0;
    std::size_t completed = 0;
    std::size_t cancelled = 0;
  };

  explicit ComputingElementSim(CeSpec spec);

  const std::string& id() const noexcept { return id_; }
  const CeSpec& spec() const noexcept { return spec_; }
  int total_cpus() const noexcept { return spec_.cpus; }
  int free_cpus() const noexcept { return spec_.cpus - static_cast<int>(running_.size()); }
  std::size_t waiting() const noexcept { return queue_.size(); }
  const std::deque<QueuedJob>& queue() const noexcept { return queue_; }
  const std::map<std::string, RunningJob>& running() const noexcept { return running_; }
  const Counters& counters() const noexcept { return counters_; }
  bool holds(const std::string& job) const;

  void push(QueuedJob job);
  // Moves queue heads onto free CPUs; returns what started.
  std::vector<RunningJob> start_ready(SimTime now);
  // False if the job is not running (cancelled meanwhile).
  bool finish(const std::string& job);
  // Drops a queued or running job.
  bool remove(const std::string& job);

 private:
  CeSpec spec_;
  std::string id_;
  std::deque<QueuedJob> queue_;
  std::map<std::string, RunningJob> running_;
  Counters counters_;
};

// Simulated files: location -> path -> size. Locations are "ui:<id>",
// "wn:<site>", "ce:<ce id>", "se:<host>" and "rb:<id>". Only SE locations
// have a capacity.
class FileSpace {
 public:
  void set_capacity(const std::string& location, std::int64_t bytes);
  std::optional<std::int64_t> capacity(const std::string& location) const;

  // Throws NoSpace; overwriting a path replaces its size.
  void put(const std::string& location, const std::string& path, std::int64_t size);
  std::optional<std::int64_t> size_of(const std::string& location, const std::string& path) const;
  bool remove(const std::string& location, const std::string& path);
  std::int64_t used(const std::string& location) const;
  const std::map<std::string, std::int64_t>& files(const std::string& location) const;
  bool make_directory(const std::string& location, const std::string& path);
  bool has_directory(const std::string& location, const std::string& path) const;

 private:
  std::map<std::string, std::map<std::string, std::int64_t>> files_;
  std::map<std::string, std::int64_t> used_;
  std::map<std::string, std::int64_t> capacity_;
  std::map<std::string, std::set<std::string>> dirs_;
};

// Where a transfer end sits, for bandwidth lookup.
struct Endpoint {
  std::string site;  // empty for components outside the fabric
  Continent continent = Continent::EU;
};

class Fabric {
 public:
  struct JobHooks {
    std::function<void(const std::string& ce, const std::string& job)> on_start;
    std::function<void(const std::string& ce, const std::string& job)> on_complete;
  };

  Fabric(Scenario scenario, std::uint64_t seed);
  Fabric(const Fabric&) = delete;
  Fabric& operator=(const Fabric&) = delete;

  const Scenario& scenario() const noexcept { return scenario_; }
  const GridSettings& settings() const noexcept { return scenario_.grid; }
  SimTime now() const noexcept { return queue_.now(); }
  EventQueue& events() noexcept { return queue_; }

  const SiteSpec& site(std::string_view id) const;  // UnknownSite
  bool has_site(std::string_view id) const { return scenario_.find_site(id) != nullptr; }
  std::vector<std::string> ce_ids() const;
  bool has_ce(std::string_view id) const;
  const ComputingElementSim& ce(std::string_view id) const;  // UnknownCe
  const SeSpec& se(std::string_view host) const;             // UnknownSe
  bool has_se(std::string_view host) const;
  std::vector<std::string> close_ses(std::string_view ce_id) const;
  const CentralServiceSpec* find_service(std::string_view id) const;
  const UiSpec* find_ui(std::string_view id) const;

  // Failure windows are half-open [start, end).
  void inject_failure(FailureSpec failure);
  bool service_up(std::string_view target, ServiceKind kind, SimTime t) const;
  bool service_up(std::string_view target, ServiceKind kind) const { return service_up(target, kind, now()); }
  const std::vector<FailureSpec>& failures() const noexcept { return failures_; }

  void set_wn_outbound(std::string_view site, bool open);
  void set_inbound_ports(std::string_view site, bool open);

  void set_hooks(JobHooks hooks) { hooks_ = std::move(hooks); }
  // Log-uniform whole seconds within the configured bounds.
  SimTime draw_duration();
  // Queues a job at the CE; the duration is drawn now when not given.
  // Throws UnknownCe, GatekeeperDown. Returns the duration used.
  SimTime enqueue(std::string_view ce_id, const std::string& job, std::optional<SimTime> duration = std::nullopt);
  // True when the job was queued or running there.
  bool cancel(std::string_view ce_id, const std::string& job);

  FileSpace& files() noexcept { return files_; }
  const FileSpace& files() const noexcept { return files_; }

  // Provider output for one site, stamped with the current time.
  std::vector<infosys::DirectoryEntry> site_entries(std::string_view site) const;
  std::vector<infosys::DirectoryEntry> snapshot_providers() const;

  Endpoint endpoint_of_site(std::string_view site) const;
  // Resolves "ui:<id>", "wn:<site>", "ce:<ce id>", "se:<host>", "rb:<id>".
  Endpoint endpoint_of(std::string_view location) const;
  double bandwidth(const Endpoint& a, const Endpoint& b) const;  // MB/s
  SimTime transfer_time(std::int64_t bytes, const Endpoint& a, const Endpoint& b) const;

  void emit(std::string kind, std::string subject, std::string detail = {});
  const std::vector<SimEvent>& event_log() const noexcept { return log_; }
  std::string event_log_text() const;

  // Processes everything up to `until` and returns the events emitted.
  std::vector<SimEvent> advance(SimTime until);
  bool step() { return queue_.step(); }

 private:
  ComputingElementSim& mutable_ce(std::string_view id);
  SiteSpec& mutable_site(std::string_view id);
  void schedule_cycle(const std::string& ce_id);
  void lrm_cycle(const std::string& ce_id);
  void complete(const std::string& ce_id, const std::string& job);
  void schedule_failure_marks(const FailureSpec& f);

  Scenario scenario_;
  EventQueue queue_;
  std::map<std::string, ComputingElementSim, std::less<>> ces_;
  std::set<std::string> cycle_pending_;
  std::vector<FailureSpec> failures_;
  FileSpace files_;
  JobHooks hooks_;
  std::vector<SimEvent> log_;
  std::uint64_t log_seq_ = 0;
};

}  // namespace worldgrid::fabric
