// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "worldgrid/common/error.hpp"
#include "worldgrid/datamgmt/replica.hpp"
#include "worldgrid/jdl/document.hpp"
#include "worldgrid/wms/broker.hpp"

namespace worldgrid::testing {

std::string shipped_dir() { return WORLDGRID_SCENARIO_DIR; }
std::string shipped_scenario_path() { return shipped_dir() + "/worldgrid.scenario"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string small_scenario_text(const std::string& extra) {
  return R"(grid name=small operations_center=EU-A
site id=EU-A country=IT continent=EU lat=45 lon=9 flavor=EDG
site id=EU-B country=CH continent=EU lat=46 lon=6 flavor=EDG
site id=US-A country=US continent=US lat=41 lon=-88 flavor=VDT
vo name=alpha
vo name=beta
ce site=EU-A host=ce.a.eu lrms=PBS cpus=2 wns=2 vos=alpha,beta tags=ATLAS,CMS
ce site=EU-B host=ce.b.eu lrms=LSF cpus=1 wns=1 vos=alpha tags=ATLAS
ce site=US-A host=srv.a.us lrms=Condor cpus=2 wns=1 vos=alpha,beta tags=ATLAS,CMS
se site=EU-A host=se.a.eu bytes=1000000000
se site=EU-B host=se.b.eu bytes=1000000000
se site=US-A host=srv.a.us bytes=1000000000
service id=ii-main kind=ii location=Main continent=EU
service id=ii-backup kind=ii location=Backup site=EU-B backup_of=ii-main
service id=rb-main kind=rb location=Main continent=EU
service id=rc-main kind=rc location=Main site=EU-A
broker id=rb-main info_primary=ii-main info_backup=ii-backup rc=rc-main
ca id=ca-eu trusted_by=EDG,VDT
ca id=ca-us trusted_by=VDT
cert subject="/CN=alice" ca=ca-eu serial=1 not_after=100000000
cert subject="/CN=bob" ca=ca-us serial=2 not_after=100000000
cert subject="/CN=carol" ca=ca-eu serial=3 not_after=100000000
member vo=alpha subject="/CN=alice"
member vo=beta subject="/CN=bob"
member vo=alpha subject="/CN=carol"
ui id=ui-1 location=Desk site=EU-A
file at=ui:ui-1 path=/home/in.txt size=1000
replica lfn=lfn:/alpha/data/input.dat se=se.b.eu size=5000000
)" + extra;
}

std::unique_ptr<gateway::Testbed> small_testbed(std::uint64_t seed, const std::string& extra) {
  return std::make_unique<gateway::Testbed>(fabric::parse_scenario(small_scenario_text(extra)), seed);
}

std::unique_ptr<gateway::Testbed> shipped_testbed(std::uint64_t seed) {
  return gateway::Testbed::load(shipped_scenario_path(), seed);
}

std::string tagged_jdl(const std::string& vo, const std::string& tag, const std::string& extra) {
  return "Executable = \"sim\";\nStdOutput = \"sim.out\";\nOutputSandbox = {\"sim.out\"};\n"
         "VirtualOrganisation = \"" + vo + "\";\nRequirements = Member(\"" + tag +
         "\", other.RunTimeEnvironment);\n" + extra;
}

std::optional<std::string> production_choose(const BrokerCase& c, std::uint64_t shuffle_seed) {
  std::vector<infosys::DirectoryEntry> entries;
  std::map<std::string, bool> access;
  for (const auto& ce : c.ces) {
    infosys::AttributeMap attrs;
    attrs["CEId"] = {ce.id};
    attrs["LRMSType"] = {"pbs"};
    attrs["TotalCPUs"] = {std::to_string(ce.total)};
    attrs["FreeCPUs"] = {std::to_string(ce.free)};
    attrs["RunningJobs"] = {std::to_string(ce.total - ce.free)};
    attrs["WaitingJobs"] = {std::to_string(ce.waiting)};
    attrs["AuthorizedVOs"] = ce.vos.empty() ? std::vector<std::string>{""} : ce.vos;
    if (!ce.tags.empty()) attrs["RunTimeEnvironment"] = ce.tags;
    if (!ce.close_ses.empty()) attrs["CloseSEs"] = ce.close_ses;
    const auto dn = [&](const std::string& attr) {
      return infosys::DistinguishedName::parse(attr + "=" + ce.id + ", mds-vo-name=site, o=grid");
    };
    entries.push_back({dn("ceid"), {"EdgCE"}, attrs, "gris", 0});
    if (ce.glue) {
      auto glue = attrs;
      glue["GlueCEUniqueID"] = {ce.id};
      entries.push_back({dn("glueceuniqueid"), {"GlueCE"}, glue, "gris", 0});
    }
    access[ce.id] = ce.access;
  }
  std::mt19937_64 rng(shuffle_seed);
  std::shuffle(entries.begin(), entries.end(), rng);

  const auto& job = c.job;
  std::string text = "Executable = \"sim\";\nVirtualOrganisation = \"" + job.vo + "\";\n" +
                     "Requirements = Member(\"" + job.tag + "\", other.RunTimeEnvironment) && other.FreeCPUs >= " +
                     std::to_string(job.min_free) + ";\nRank = " + oracle_rank_text(job.rank) + ";\n";
  if (job.has_input) text += "InputData = {\"lfn:/" + job.vo + "/input.dat\"};\n";
  const auto doc = jdl::parse_jdl(text);

  wms::BrokerConfig config{"rb", "ii", "", "rc", job.glue_aware, job.strict, jdl::parse_expression("other.FreeCPUs")};
  wms::MatchRequest request{&doc, "/CN=owner", job.vo, job.exclude};
  const wms::AccessCheck check = [&](const infosys::DirectoryEntry& e) { return access.at(*e.first("CEId")); };
  const wms::ReplicaCheck replicas = [&](std::span<const std::string>, std::span<const std::string> close) {
    return std::any_of(close.begin(), close.end(), [&](const std::string& se) { return job.replica_ses.contains(se); });
  };
  try {
    return wms::rank_candidates(config, request, entries, check, replicas).chosen().ce;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoMatchingResources) return std::nullopt;
    throw;
  }
}

std::optional<std::string> replica_sequence_mismatch(std::uint64_t seed, int steps) {
  const std::vector<std::string> ses{"se.a.eu", "se.b.eu", "srv.a.us"};
  const std::map<std::string, std::string> site_of{{"se.a.eu", "EU-A"}, {"se.b.eu", "EU-B"}, {"srv.a.us", "US-A"}};
  const std::vector<std::string> sites{"EU-A", "EU-B", "US-A"};
  const std::vector<std::string> lfns{"lfn:/alpha/a", "lfn:/alpha/b", "lfn:/alpha/c/d", "lfn:/beta/e"};
  const std::vector<std::int64_t> sizes{100'000'000, 300'000'000, 450'000'000};
  std::mt19937_64 rng(seed);
  {
    fabric::Fabric fabric(fabric::parse_scenario(small_scenario_text()), 1);
    datamgmt::ReplicaCatalog catalog;
    datamgmt::ReplicaManager manager(fabric, catalog);
    ReplicaModel model;
    for (const auto& se : ses) {
      const auto& site = site_of.at(se);
      model.add_se(se, {site, site == "US-A" ? "US" : "EU", 1'000'000'000});
    }
    const std::vector<std::string> sources{"ui:ui-1", "wn:EU-A", "wn:US-A"};
    for (const auto& src : sources)
      for (int i = 0; i < 3; ++i) {
        const auto size = sizes[rng() % sizes.size()];
        fabric.files().put(src, "/f" + std::to_string(i), size);
        model.put_source(src, "/f" + std::to_string(i), size);
      }
    std::map<std::string, SimTime> down_until;
    for (int step = 0; step < steps; ++step) {
      const auto now = fabric.now();
      for (const auto& site : sites) model.set_gridftp(site, now >= down_until[site]);
      const auto op = rng() % 10;
      const auto lfn = lfns[rng() % lfns.size()];
      const auto se = rng() % 12 == 0 ? std::string("se.nowhere") : ses[rng() % ses.size()];
      ReplicaModel::Outcome want;
      std::string got_error;
      bool got_copied = false;
      const auto run = [&](const std::function<datamgmt::Transfer()>& fn) {
        try {
          got_copied = fn().copied;
        } catch (const Error& e) {
          got_error = std::string(to_string(e.code()));
        }
      };
      std::string what;
      if (op < 4) {
        std::string src, path;
        if (rng() % 3 == 0) {
          const auto host = ses[rng() % ses.size()];
          src = "se:" + host;
          path = "/grid/" + lfns[rng() % lfns.size()].substr(5);
        } else {
          src = sources[rng() % sources.size()];
          path = "/f" + std::to_string(rng() % 4);
        }
        what = "copy " + src + path + " -> " + se + " as " + lfn;
        want = model.copy(src, path, se, lfn);
        run([&] { return manager.copy_and_register(src, path, se, datamgmt::LogicalFileName::parse(lfn)); });
      } else if (op < 7) {
        what = "replicate " + lfn + " -> " + se;
        want = model.replicate(lfn, se);
        run([&] { return manager.replicate(datamgmt::LogicalFileName::parse(lfn), se); });
      } else if (op < 8) {
        what = "unregister " + lfn + " @ " + se;
        want = model.unregister(lfn, se);
        const auto parsed = datamgmt::LogicalFileName::parse(lfn);
        datamgmt::PhysicalFileName pfn{"gridftp", se, datamgmt::physical_path(parsed), 0};
        for (const auto& p : manager.list_replicas(parsed))
          if (p.se == se) pfn = p;
        try {
          manager.unregister(parsed, pfn);
        } catch (const Error& e) {
          got_error = std::string(to_string(e.code()));
        }
      } else if (op < 9) {
        const auto site = sites[rng() % sites.size()];
        const bool open = rng() % 2;
        fabric.set_wn_outbound(site, open);
        model.set_outbound(site, open);
        continue;
      } else {
        const auto site = sites[rng() % sites.size()];
        const auto len = 1 + static_cast<SimTime>(rng() % 3);
        fabric.inject_failure(fabric::FailureSpec{site, fabric::ServiceKind::GridFtp, now, now + len});
        down_until[site] = std::max(down_until[site], now + len);
        model.set_gridftp(site, false);
        continue;
      }
      const auto where = "step " + std::to_string(step) + ": " + what;
      if (got_error != want.error) return where + ": error '" + got_error + "', model '" + want.error + "'";
      if (got_copied != want.copied) return where + ": copied flag differs";
      std::map<std::string, std::set<std::string>> catalogue;
      for (const auto& l : catalog.lfns())
        for (const auto& p : catalog.list(l)) catalogue[l.to_string()].insert(p.se);
      if (catalogue != model.catalogue()) return where + ": catalogue differs";
      for (const auto& s : ses)
        if (fabric.files().used("se:" + s) != model.used(s)) return where + ": usage of " + s + " differs";
      if (auto v = manager.consistency_violation()) return where + ": " + *v;
      fabric.advance(now + 1);
    }
  }
  return std::nullopt;
}

}  // namespace worldgrid::testing
