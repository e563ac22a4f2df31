// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "worldgrid/common/error.hpp"
#include "worldgrid/monitor/monitor.hpp"

namespace worldgrid::monitor {
namespace {

using fabric::ServiceKind;

TEST(Status, OrderingAndColours) {
  EXPECT_EQ(worst(ProbeStatus::Up, ProbeStatus::Warn), ProbeStatus::Warn);
  EXPECT_EQ(worst(ProbeStatus::Down, ProbeStatus::Warn), ProbeStatus::Down);
  EXPECT_EQ(color_of(ProbeStatus::Up), "green");
  EXPECT_EQ(color_of(ProbeStatus::Warn), "yellow");
  EXPECT_EQ(color_of(ProbeStatus::Down), "red");
  EXPECT_EQ(parse_probe_status("WARN"), ProbeStatus::Warn);
  EXPECT_THROW(parse_probe_status("ok"), Error);
}

TEST(Distance, GreatCircle) {
  EXPECT_NEAR(distance_km(0, 0, 0, 0), 0.0, 1e-9);
  // A quarter of the equator on a 6371 km sphere.
  EXPECT_NEAR(distance_km(0, 0, 0, 90), 6371.0 * 3.14159265358979 / 2, 1.0);
}

TEST(History, RingKeepsTheNewest) {
  HistoryRing ring(3);
  for (int i = 0; i < 5; ++i) ring.push(ProbeResult{i, {"S", ServiceKind::Gris}, ProbeStatus::Up, 1, ""});
  ASSERT_EQ(ring.size(), 3u);
  EXPECT_EQ(ring.items().front().t, 2);
  EXPECT_EQ(ring.items().back().t, 4);
}

TEST(Filter, ParsesAndRejects) {
  EXPECT_EQ(MapFilter::parse("").kind, MapFilter::Kind::None);
  EXPECT_EQ(MapFilter::parse("vo=alpha").kind, MapFilter::Kind::Vo);
  EXPECT_EQ(MapFilter::parse("site=EU-A").to_string(), "site=EU-A");
  EXPECT_THROW(MapFilter::parse("colour=red"), Error);
  EXPECT_THROW(MapFilter::parse("vo="), Error);
}

struct Oracle {
  std::set<ProbeTarget> down;
  std::set<ProbeTarget> warn;
  ProbeOracle make() {
    return {[this](const ProbeTarget& t, SimTime) { return down.contains(t); },
            [this](const ProbeTarget& t, SimTime) -> std::optional<std::string> {
              if (warn.contains(t)) return "degraded";
              return std::nullopt;
            }};
  }
};

TEST(Probes, StatusesFollowTheOracle) {
  auto tb = testing::small_testbed();
  Oracle o;
  Monitor m(tb->fabric(), o.make(), 8);
  m.add_probe({{"EU-A", ServiceKind::Gatekeeper}, 30, 5, 0});
  m.add_probe({{"EU-A", ServiceKind::Gris}, 30, 5, 0});
  m.add_probe({{"US-A", ServiceKind::Gatekeeper}, 60, 5, 0});
  o.down.insert({"EU-A", ServiceKind::Gris});
  o.warn.insert({"US-A", ServiceKind::Gatekeeper});
  EXPECT_EQ(m.run_probes(0).size(), 3u);
  EXPECT_EQ(m.run_probes(10).size(), 0u);
  EXPECT_EQ(m.run_probes(30).size(), 2u);
  EXPECT_EQ(m.latest({"EU-A", ServiceKind::Gris})->status, ProbeStatus::Down);
  EXPECT_EQ(m.latest({"EU-A", ServiceKind::Gris})->latency_ms, 5000);
  EXPECT_EQ(m.latest({"US-A", ServiceKind::Gatekeeper})->status, ProbeStatus::Warn);
  // The operations centre itself answers in the fixed handshake time.
  EXPECT_EQ(m.latest({"EU-A", ServiceKind::Gatekeeper})->latency_ms, 2);
  EXPECT_EQ(m.history().size(), 5u);

  const auto snap = m.aggregate(MapFilter{}, 30);
  ASSERT_EQ(snap.sites.size(), 3u);
  EXPECT_EQ(snap.sites[0].id, "EU-A");
  EXPECT_EQ(snap.sites[0].rollup, ProbeStatus::Down);
  EXPECT_EQ(snap.sites[2].rollup, ProbeStatus::Warn);
  EXPECT_EQ(snap.sites[1].rollup, ProbeStatus::Up);  // nothing probed there
}

TEST(Probes, FarTargetsTimeOut) {
  auto tb = testing::small_testbed();
  Oracle o;
  Monitor m(tb->fabric(), o.make());
  const auto r = m.observe({"US-A", ServiceKind::Gatekeeper}, 0, 0);
  EXPECT_EQ(r.status, ProbeStatus::Down);
  EXPECT_EQ(r.detail, "timeout");
}

TEST(Map, FiltersSelectSites) {
  auto tb = testing::small_testbed();
  auto& m = tb->monitor();
  EXPECT_EQ(m.aggregate(MapFilter::parse("country=CH"), 0).sites.size(), 1u);
  EXPECT_EQ(m.aggregate(MapFilter::parse("vo=beta"), 0).sites.size(), 2u);
  EXPECT_EQ(m.aggregate(MapFilter::parse("site=US-A"), 0).sites.at(0).id, "US-A");
  EXPECT_EQ(m.aggregate(MapFilter::parse("vo=alpha"), 0).central.size(), 4u);
  for (const auto* bad : {"vo=gamma", "country=FR", "site=Nowhere"}) {
    try {
      m.aggregate(MapFilter::parse(bad), 0);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::UnknownFilterValue) << bad;
    }
  }
}

TEST(Map, InjectedOutageTurnsTheSiteRed) {
  auto tb = testing::small_testbed();
  tb->inject_failure(fabric::FailureSpec{"EU-B", ServiceKind::Gatekeeper, 40, 400});
  tb->advance(100);
  const auto snap = tb->monitor().aggregate(MapFilter::parse("site=EU-B"), tb->now());
  EXPECT_EQ(snap.sites.at(0).rollup, ProbeStatus::Down);
  tb->advance(500);
  EXPECT_EQ(tb->monitor().aggregate(MapFilter::parse("site=EU-B"), tb->now()).sites.at(0).rollup, ProbeStatus::Up);
}

TEST(Map, ExportRoundTrips) {
  auto tb = testing::small_testbed();
  tb->wms().submit(testing::tagged_jdl("alpha", "ATLAS"), "/CN=alice", "rb-main", "ui-1");
  tb->advance(60);
  const auto snap = tb->monitor().aggregate(MapFilter{}, tb->now());
  const auto text = export_map(snap);
  EXPECT_EQ(parse_map(text), snap);
  EXPECT_EQ(export_map(parse_map(text)), text);
  EXPECT_THROW(parse_map("{\"t\": 1}"), Error);
  EXPECT_THROW(parse_map("not json"), Error);
}

}  // namespace
}  // namespace worldgrid::monitor
