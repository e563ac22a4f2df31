// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "worldgrid/common/error.hpp"
#include "worldgrid/datamgmt/replica.hpp"
#include "worldgrid/fabric/fabric.hpp"

namespace worldgrid::datamgmt {
namespace {

TEST(Names, LogicalAndPhysicalForms) {
  const auto lfn = LogicalFileName::parse("lfn:/datatag/cms/minbias-001.fz");
  EXPECT_EQ(lfn.vo, "datatag");
  EXPECT_EQ(lfn.path, "cms/minbias-001.fz");
  EXPECT_EQ(lfn.to_string(), "lfn:/datatag/cms/minbias-001.fz");
  EXPECT_EQ(physical_path(lfn), "/grid/datatag/cms/minbias-001.fz");
  for (const char* bad : {"", "lfn:", "lfn:/", "lfn:/vo", "file:/vo/x", "lfn:/vo/"})
    EXPECT_THROW(LogicalFileName::parse(bad), Error) << bad;
}

TEST(Catalog, RemoveUnknownPairIsAnError) {
  ReplicaCatalog rc;
  const auto lfn = LogicalFileName::parse("lfn:/v/x");
  rc.add(lfn, PhysicalFileName{"gridftp", "se1", "/grid/v/x", 5});
  EXPECT_EQ(rc.list(lfn).size(), 1u);
  try {
    rc.remove(lfn, PhysicalFileName{"gridftp", "se2", "/grid/v/x", 5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownPair);
  }
  rc.remove(lfn, PhysicalFileName{"gridftp", "se1", "/grid/v/x", 5});
  EXPECT_FALSE(rc.contains(lfn));
}

struct Harness {
  explicit Harness(const std::string& extra = {})
      : fabric(fabric::parse_scenario(testing::small_scenario_text(extra)), 1), manager(fabric, catalog) {}
  fabric::Fabric fabric;
  ReplicaCatalog catalog;
  ReplicaManager manager;
};

TEST(Manager, ReplicatePrefersTheClosestSource) {
  Harness h;
  h.fabric.files().put("ui:ui-1", "/d", 100'000'000);
  const auto lfn = LogicalFileName::parse("lfn:/alpha/d");
  h.manager.copy_and_register("ui:ui-1", "/d", "srv.a.us", lfn);
  h.manager.copy_and_register("ui:ui-1", "/d", "se.b.eu", lfn);
  const auto t = h.manager.replicate(lfn, "se.a.eu");
  EXPECT_TRUE(t.copied);
  EXPECT_EQ(t.duration, 1);  // 100 MB from se.b.eu at same-continent speed
  EXPECT_FALSE(h.manager.replicate(lfn, "se.a.eu").copied);
  EXPECT_EQ(h.manager.list_replicas(lfn).size(), 3u);
  EXPECT_EQ(h.manager.consistency_violation(), std::nullopt);
}

TEST(Manager, WorkerNodeUploadsNeedOutboundConnectivity) {
  Harness h;
  h.fabric.files().put("wn:US-A", "/out", 10);
  h.fabric.set_wn_outbound("US-A", false);
  try {
    h.manager.copy_and_register("wn:US-A", "/out", "se.a.eu", LogicalFileName::parse("lfn:/alpha/out"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ConnectivityDenied);
  }
  h.fabric.set_inbound_ports("EU-B", false);
  EXPECT_THROW(h.manager.make_directory("EU-B", "/scratch"), Error);
  h.manager.make_directory("EU-A", "/scratch");
  EXPECT_TRUE(h.fabric.files().has_directory("wn:EU-A", "/scratch"));
}

TEST(Manager, ConsistencyCheckSpotsMissingFiles) {
  Harness h;
  h.fabric.files().put("ui:ui-1", "/d", 10);
  const auto lfn = LogicalFileName::parse("lfn:/alpha/d");
  h.manager.copy_and_register("ui:ui-1", "/d", "se.a.eu", lfn);
  EXPECT_EQ(h.manager.consistency_violation(), std::nullopt);
  h.fabric.files().remove("se:se.a.eu", physical_path(lfn));
  EXPECT_NE(h.manager.consistency_violation(), std::nullopt);
}

// Random operation sequences against the reference model.
TEST(Manager, RandomSequencesAgreeWithModel) {
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    const auto mismatch = testing::replica_sequence_mismatch(seed);
    ASSERT_EQ(mismatch, std::nullopt) << "seed " << seed;
  }
}

}  // namespace
}  // namespace worldgrid::datamgmt
