// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "worldgrid/auth/context.hpp"
#include "worldgrid/datamgmt/replica.hpp"
#include "worldgrid/fabric/fabric.hpp"
#include "worldgrid/infosys/index.hpp"
#include "worldgrid/wms/broker.hpp"
#include "worldgrid/wms/job.hpp"

namespace worldgrid::wms {

inline constexpr int kMaxDispatchAttempts = 3;

struct GridServices {
  fabric::Fabric& fabric;
  infosys::InformationService& info;
  auth::SecurityContext& security;
  std::map<std::string, datamgmt::ReplicaManager*, std::less<>> catalogs;
};

// Resource brokers, the job submission service and the LB store. Every
// step after submission runs as a fabric event, so jobs move only while
// the simulation advances.
class WorkloadManager {
 public:
  explicit WorkloadManager(GridServices services);
  WorkloadManager(const WorkloadManager&) = delete;
  WorkloadManager& operator=(const WorkloadManager&) = delete;

  void add_broker(BrokerConfig config);
  const BrokerConfig& broker(std::string_view id) const;  // UnknownBroker
  std::vector<std::string> broker_ids() const;

  // Throws ParseError, UnknownBroker, VoMembershipError, SourceMissing and
  // ConnectivityDenied when the broker itself is down.
  std::string submit(std::string_view jdl_text, const std::string& owner, const std::string& rb,
                     const std::string& ui);

  // Skips matchmaking. Throws ParseError, UnknownCe, SourceMissing, the
  // authentication errors and NotAuthorized before a job exists; throws
  // GatekeeperDown after recording the job as ABORTED.
  std::string direct_submit(std::string_view jdl_text, const std::string& owner, const std::string& ce,
                            const std::string& ui);

  // Read-only matchmaking for a WAITING job against the broker's current
  // index. Throws NoMatchingResources, AllIndexesDown, IllegalTransition.
  MatchResult match(std::string_view job_id) const;

  // False (and no change) when the job is already terminal.
  bool cancel(std::string_view job_id);

  const Job& job(std::string_view id) const;  // UnknownJob
  std::vector<JobSummary> jobs(const std::optional<std::string>& owner = std::nullopt,
                               const std::optional<JobState>& state = std::nullopt) const;
  std::vector<LbEvent> lb_query(std::string_view job_id) const { return lb_.events_of(job_id); }
  const LbStore& lb() const noexcept { return lb_; }
  // Retrieved output sandbox; throws InvalidArgument while the job runs.
  std::vector<OutputFile> output(std::string_view job_id) const;
  bool all_terminal() const;
  std::size_t size() const noexcept { return jobs_.size(); }

 private:
  Job& mutable_job(std::string_view id);
  std::string new_job_id();
  void record(Job& job, std::optional<JobState> to, Component component, std::string reason);
  MatchResult match_for(const Job& job, std::string* index_used) const;
  std::string sandbox_location(const Job& job) const;
  std::int64_t capture_input(const Job& job, std::string_view ui);

  void arrive_at_rb(const std::string& id);
  void run_match(const std::string& id);
  void schedule_job(const std::string& id, const std::string& ce);
  void dispatch(const std::string& id);
  void arrive_at_ce(const std::string& id, int attempt);
  void retry_or_abort(Job& job, const std::string& reason);
  void on_start(const std::string& ce, const std::string& id);
  void on_complete(const std::string& ce, const std::string& id);
  void finish_output(const std::string& id, std::vector<OutputFile> files);

  GridServices services_;
  std::map<std::string, BrokerConfig, std::less<>> brokers_;
  std::map<std::string, Job, std::less<>> jobs_;
  std::map<std::string, std::string, std::less<>> pending_ce_;  // READY job -> chosen CE
  LbStore lb_;
  std::uint64_t next_id_ = 1;
};

// Client-side helper cycling through a fixed CE list for direct submission.
class RoundRobin {
 public:
  explicit RoundRobin(std::vector<std::string> ces);
  const std::string& next();

 private:
  std::vector<std::string> ces_;
  std::size_t cursor_ = 0;
};

}  // namespace worldgrid::wms
