#include <gtest/gtest.h>

#include "vsp/scenario.hpp"

namespace vsp {
namespace {

TEST(Scenario, SmallTopology) {
  const auto spec = builtin_scenario(BuiltinScenario::Small, 20, 1);
  EXPECT_EQ(spec.core_nodes, 2);
  EXPECT_EQ(spec.enb_nodes, 3);
  EXPECT_EQ(spec.rsu_nodes, 5);
  EXPECT_EQ(spec.lane_count, 2);
  EXPECT_DOUBLE_EQ(spec.lane_length_km, 2.0);
  EXPECT_FALSE(spec.nonstandard_vehicle_count);

  const auto p = instantiate(spec);
  ASSERT_EQ(p.nodes().size(), 10u);
  for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(p.nodes()[c].tier, Tier::Core);
  for (std::size_t c = 2; c < 5; ++c) EXPECT_EQ(p.nodes()[c].tier, Tier::Enb);
  for (std::size_t c = 5; c < 10; ++c) EXPECT_EQ(p.nodes()[c].tier, Tier::Rsu);
  EXPECT_EQ(p.nodes()[0].capacity, (ResourceVector{32.0, 64.0, 240.0}));
  EXPECT_EQ(p.nodes()[2].capacity, (ResourceVector{8.0, 16.0, 240.0}));
  EXPECT_EQ(p.nodes()[9].capacity, (ResourceVector{8.0, 16.0, 240.0}));
}

TEST(Scenario, LargeTopology) {
  const auto spec = builtin_scenario(BuiltinScenario::Large, 140, 1);
  EXPECT_EQ(spec.core_nodes, 7);
  EXPECT_EQ(spec.enb_nodes, 8);
  EXPECT_EQ(spec.rsu_nodes, 15);
  EXPECT_DOUBLE_EQ(spec.lane_length_km, 8.0);
  EXPECT_EQ(instantiate(spec).nodes().size(), 30u);
}

TEST(Scenario, ServiceCatalog) {
  const auto p = instantiate(builtin_scenario(BuiltinScenario::Small, 20, 1));
  ASSERT_EQ(p.types().size(), 3u);
  EXPECT_EQ(p.types()[0].name, ServiceClass::Cam);
  EXPECT_DOUBLE_EQ(p.types()[0].delay_threshold_ms, 20.0);
  EXPECT_EQ(p.types()[0].demand, (ResourceVector{2.0, 3.5, 4.0}));
  EXPECT_EQ(p.types()[1].name, ServiceClass::Denm);
  EXPECT_DOUBLE_EQ(p.types()[1].delay_threshold_ms, 50.0);
  EXPECT_EQ(p.types()[1].demand, (ResourceVector{4.0, 7.0, 4.0}));
  EXPECT_EQ(p.types()[2].name, ServiceClass::Media);
  EXPECT_DOUBLE_EQ(p.types()[2].delay_threshold_ms, 150.0);
  EXPECT_EQ(p.types()[2].demand, (ResourceVector{8.0, 14.0, 40.0}));
}

TEST(Scenario, InstanceCountsFollowVehicleCount) {
  const std::pair<BuiltinScenario, int> cases[] = {{BuiltinScenario::Small, 20},
                                                    {BuiltinScenario::Small, 100},
                                                    {BuiltinScenario::Large, 140},
                                                    {BuiltinScenario::Large, 300}};
  const std::size_t expected[] = {1, 5, 7, 15};
  for (std::size_t i = 0; i < 4; ++i) {
    const auto p = instantiate(builtin_scenario(cases[i].first, cases[i].second, 3));
    EXPECT_EQ(p.instances().size(), 3 * expected[i]);
    for (const auto& t : p.types()) {
      EXPECT_EQ(p.instances_of(t.id).size(), expected[i]);
      EXPECT_EQ(static_cast<std::size_t>(t.redundancy_requirement), expected[i]);
    }
    EXPECT_EQ(p.vehicle_count(), static_cast<std::size_t>(cases[i].second));
  }
  // 60 vehicles: three of each type, nine in all.
  EXPECT_EQ(instantiate(builtin_scenario(BuiltinScenario::Small, 60, 3)).instances().size(), 9u);
  // Ceiling, not floor.
  EXPECT_EQ(instantiate(builtin_scenario(BuiltinScenario::Small, 21, 3)).instances().size(), 6u);
}

TEST(Scenario, InstancesAreContiguousByType) {
  const auto p = instantiate(builtin_scenario(BuiltinScenario::Small, 60, 3));
  for (std::size_t s = 0; s < p.instances().size(); ++s) {
    EXPECT_EQ(p.instances()[s].id.value, s);
    EXPECT_EQ(p.instances()[s].type_ref.value, s / 3);
  }
}

TEST(Scenario, DelaysStayInsideTierRanges) {
  for (const auto which : {BuiltinScenario::Small, BuiltinScenario::Large}) {
    const auto spec = builtin_scenario(which, which == BuiltinScenario::Small ? 100 : 300, 11);
    const auto p = instantiate(spec);
    for (std::size_t v = 0; v < p.vehicle_count(); ++v) {
      for (const auto& node : p.nodes()) {
        const double d = p.delay_matrix().at(v, node.id);
        const auto& r = spec.delay_range(node.tier);
        EXPECT_GE(d, r.low_ms);
        EXPECT_LT(d, r.high_ms);
      }
    }
  }
}

TEST(Scenario, DeterministicPerSeed) {
  const auto a = instantiate(builtin_scenario(BuiltinScenario::Small, 40, 99));
  const auto b = instantiate(builtin_scenario(BuiltinScenario::Small, 40, 99));
  const auto c = instantiate(builtin_scenario(BuiltinScenario::Small, 40, 100));
  const auto da = a.delay_matrix().data();
  const auto db = b.delay_matrix().data();
  const auto dc = c.delay_matrix().data();
  EXPECT_TRUE(std::equal(da.begin(), da.end(), db.begin(), db.end()));
  EXPECT_FALSE(std::equal(da.begin(), da.end(), dc.begin(), dc.end()));
}

// A vehicle's delays do not depend on how many other vehicles exist.
TEST(Scenario, DelayDependsOnlyOnSeedVehicleAndNode) {
  const auto small = instantiate(builtin_scenario(BuiltinScenario::Small, 20, 5));
  const auto big = instantiate(builtin_scenario(BuiltinScenario::Small, 100, 5));
  for (std::size_t v = 0; v < 20; ++v) {
    for (const auto& node : small.nodes()) {
      EXPECT_EQ(small.delay_matrix().at(v, node.id), big.delay_matrix().at(v, node.id));
    }
  }
}

TEST(Scenario, NonstandardVehicleCountFlagged) {
  EXPECT_TRUE(builtin_scenario(BuiltinScenario::Small, 30, 1).nonstandard_vehicle_count);
  EXPECT_TRUE(builtin_scenario(BuiltinScenario::Large, 100, 1).nonstandard_vehicle_count);
  EXPECT_FALSE(builtin_scenario(BuiltinScenario::Large, 220, 1).nonstandard_vehicle_count);
}

TEST(Scenario, InvalidSpecs) {
  EXPECT_THROW(builtin_scenario(BuiltinScenario::Small, 0, 1), InvalidSpec);

  auto spec = builtin_scenario(BuiltinScenario::Small, 20, 1);
  spec.rsu_delay = {10.0, 1.0};
  EXPECT_THROW(instantiate(spec), InvalidSpec);

  spec = builtin_scenario(BuiltinScenario::Small, 20, 1);
  spec.enb_delay = {0.0, 5.0};
  EXPECT_THROW(instantiate(spec), InvalidSpec);

  spec = builtin_scenario(BuiltinScenario::Small, 20, 1);
  spec.core_capacity.memory = 0.0;
  EXPECT_THROW(instantiate(spec), InvalidSpec);

  spec = builtin_scenario(BuiltinScenario::Small, 20, 1);
  spec.vehicles_per_instance = 0;
  EXPECT_THROW(instantiate(spec), InvalidSpec);
}

TEST(Scenario, MoreInstancesThanNodesIsInfeasible) {
  // 220 vehicles need 11 instances per type but SMALL has 10 nodes.
  EXPECT_THROW(instantiate(builtin_scenario(BuiltinScenario::Small, 220, 1)), InfeasibleSpec);
  EXPECT_NO_THROW(instantiate(builtin_scenario(BuiltinScenario::Small, 200, 1)));
}

TEST(Scenario, ParseNames) {
  EXPECT_EQ(parse_builtin_scenario("small"), BuiltinScenario::Small);
  EXPECT_EQ(parse_builtin_scenario("LARGE"), BuiltinScenario::Large);
  EXPECT_FALSE(parse_builtin_scenario("medium"));
}

TEST(VehiclePositions, SpreadOverLanes) {
  const auto spec = builtin_scenario(BuiltinScenario::Small, 20, 1);
  const auto pos = vehicle_positions(spec);
  ASSERT_EQ(pos.size(), 20u);
  int lane0 = 0;
  for (const auto& p : pos) {
    EXPECT_GE(p.lane, 0);
    EXPECT_LT(p.lane, 2);
    EXPECT_GE(p.km, 0.0);
    EXPECT_LE(p.km, spec.lane_length_km);
    lane0 += p.lane == 0;
  }
  EXPECT_EQ(lane0, 10);
}

}  // namespace
}  // namespace vsp
