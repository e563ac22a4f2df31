// Copyright 2026 The WorldGrid Simulator Authors.
// Licensed under the Apache License, Version 2.0. See
// http://www.apache.org/licenses/LICENSE-2.0

#include <random>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "worldgrid/common/error.hpp"
#include "worldgrid/wms/broker.hpp"

namespace worldgrid::wms {
namespace {

using testing::OracleCe;
using testing::OracleJob;

TEST(Ranking, OrderingKeys) {
  const Candidate close_low{"z", 1.0, true};
  const Candidate far_high{"a", 9.0, false};
  const Candidate close_undefined{"b", std::nullopt, true};
  const Candidate close_high{"y", 5.0, true};
  const Candidate close_high_b{"x", 5.0, true};
  EXPECT_TRUE(ranks_before(close_low, far_high));
  EXPECT_TRUE(ranks_before(close_low, close_undefined));
  EXPECT_TRUE(ranks_before(close_high, close_low));
  EXPECT_TRUE(ranks_before(close_high_b, close_high));
}

TEST(Broker, HandBuiltCase) {
  testing::BrokerCase c;
  c.ces = {OracleCe{"b:2119/pbs-long", {"alpha"}, {"ATLAS"}, 4, 2, 0, {"se1"}},
           OracleCe{"a:2119/pbs-long", {"alpha"}, {"ATLAS"}, 4, 2, 0, {}},
           OracleCe{"c:2119/pbs-long", {"alpha"}, {"ATLAS"}, 8, 8, 0, {}},
           OracleCe{"d:2119/pbs-long", {"beta"}, {"ATLAS"}, 8, 8, 0, {"se1"}}};
  c.job.vo = "alpha";
  c.job.tag = "ATLAS";
  EXPECT_EQ(testing::oracle_choose(c.ces, c.job), "c:2119/pbs-long");
  EXPECT_EQ(testing::production_choose(c, 1), "c:2119/pbs-long");
  c.job.has_input = true;
  c.job.replica_ses = {"se1"};
  EXPECT_EQ(testing::production_choose(c, 2), "b:2119/pbs-long");
  c.job.rank = OracleJob::Rank::Constant;
  c.job.has_input = false;
  EXPECT_EQ(testing::production_choose(c, 3), "a:2119/pbs-long");
  c.job.tag = "CMS";
  EXPECT_EQ(testing::production_choose(c, 4), std::nullopt);
}

TEST(Broker, RandomGridsAgreeWithTheOracle) {
  std::mt19937_64 rng(1234);
  int matched = 0;
  for (int i = 0; i < 3000; ++i) {
    const auto c = testing::random_broker_case(rng);
    const auto want = testing::oracle_choose(c.ces, c.job);
    ASSERT_EQ(testing::production_choose(c, static_cast<std::uint64_t>(i)), want) << "case " << i;
    matched += want.has_value();
  }
  EXPECT_GT(matched, 300);  // enough positive cases to mean something
}

TEST(Broker, ResourceValuesAreTyped) {
  infosys::DirectoryEntry e{infosys::DistinguishedName::parse("ceid=x, o=grid"),
                            {"EdgCE"},
                            {{"CEId", {"x"}}, {"FreeCPUs", {"3"}}, {"RunTimeEnvironment", {"ATLAS"}}, {"Odd", {"a", "b"}}},
                            "",
                            0};
  const auto v = resource_values(e);
  EXPECT_EQ(v.at("FreeCPUs"), jdl::Value(std::int64_t{3}));
  EXPECT_TRUE(v.at("RunTimeEnvironment").is_list());
  EXPECT_TRUE(v.at("Odd").is_list());
  EXPECT_EQ(v.at("CEId"), jdl::Value("x"));
}

}  // namespace
}  // namespace worldgrid::wms
