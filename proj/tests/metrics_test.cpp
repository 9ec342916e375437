#include <numeric>

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vsp/exact.hpp"
#include "vsp/greedy.hpp"
#include "vsp/metrics.hpp"
#include "vsp/scenario.hpp"

namespace vsp {
namespace {

const ResourceVector kRsu{8.0, 16.0, 240.0};

TEST(Utilization, SingleNodeHostingCam) {
  const auto p = testing::constant_delay_problem({{TypeId{0}, ServiceClass::Cam, 20.0, {2.0, 3.5, 4.0}, 1}},
                                                 {{NodeId{0}, Tier::Rsu, kRsu}}, {3.0}, 2);
  const auto u = utilization(p, make_placement(p, {NodeId{0}}));
  EXPECT_DOUBLE_EQ(u.at(Resource::Cpu), 0.25);
  EXPECT_DOUBLE_EQ(u.at(Resource::Memory), 0.21875);
  EXPECT_NEAR(u.at(Resource::Storage), 0.01667, 1e-5);
}

TEST(Utilization, AveragesOverAllNodes) {
  // DENM on one of two identical nodes.
  const auto p = testing::constant_delay_problem({{TypeId{0}, ServiceClass::Denm, 50.0, {4.0, 7.0, 4.0}, 1}},
                                                 {{NodeId{0}, Tier::Rsu, kRsu}, {NodeId{1}, Tier::Rsu, kRsu}},
                                                 {3.0, 4.0}, 2);
  const auto u = utilization(p, make_placement(p, {NodeId{0}}));
  EXPECT_DOUBLE_EQ(u.at(Resource::Cpu), 0.25);
  EXPECT_DOUBLE_EQ(u.at(Resource::Memory), 0.21875);
  EXPECT_DOUBLE_EQ(u.at(Resource::Storage), 2.0 / 240.0);
}

TEST(Utilization, ZeroWhenNothingPlaced) {
  const auto p = testing::constant_delay_problem({}, {{NodeId{0}, Tier::Rsu, kRsu}}, {3.0}, 1);
  const auto u = utilization(p, Placement{});
  for (const Resource r : kAllResources) EXPECT_EQ(u.at(r), 0.0);
}

TEST(PerTypeDelay, ConstantMatrix) {
  const auto p = testing::illustrative_example();
  const auto d = per_type_avg_delay(p, make_placement(p, {NodeId{0}, NodeId{1}, NodeId{2}}));
  EXPECT_DOUBLE_EQ(d.at(ServiceClass::Media), 100.0);
  EXPECT_DOUBLE_EQ(d.at(ServiceClass::Denm), 30.0);
  EXPECT_DOUBLE_EQ(d.at(ServiceClass::Cam), 5.0);
}

// Property: instance-weighted per-type averages add back up to the objective.
TEST(PerTypeDelay, AggregateIdentity) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto p = instantiate(builtin_scenario(BuiltinScenario::Small, 60, seed));
    const auto r = solve_greedy(p);
    ASSERT_TRUE(r.feasible());
    const auto rep = make_report(p, r, SolverKind::Greedy, seed);
    double total = 0.0;
    for (const auto& [cls, avg] : rep.per_type_avg_delay_ms) {
      total += avg * static_cast<double>(rep.per_type_instances.at(cls));
    }
    EXPECT_NEAR(total, rep.aggregate_avg_delay_ms, 1e-9 * rep.aggregate_avg_delay_ms);
    // CAM lands on RSUs, whose delays lie in [1, 10).
    EXPECT_GE(rep.per_type_avg_delay_ms.at(ServiceClass::Cam), 1.0);
    EXPECT_LT(rep.per_type_avg_delay_ms.at(ServiceClass::Cam), 10.0);
  }
}

TEST(Histogram, MassSumsToOneAndBinsAligned) {
  const auto h = histogram_of({1.0, 2.0, 6.0, 9.99, 10.0, 23.0}, 5.0);
  // 15-20 is empty but still present.
  ASSERT_EQ(h.bins.size(), 5u);
  EXPECT_DOUBLE_EQ(h.bins.front().left_ms, 0.0);
  EXPECT_DOUBLE_EQ(h.bins.back().right_ms, 25.0);
  EXPECT_DOUBLE_EQ(h.bins[0].mass, 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(h.bins[1].mass, 2.0 / 6.0);
  EXPECT_DOUBLE_EQ(h.bins[2].mass, 1.0 / 6.0);
  EXPECT_EQ(h.bins[3].mass, 0.0);
  EXPECT_DOUBLE_EQ(h.bins[4].mass, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(h.bins[0].density(), 2.0 / 30.0);
  double mass = 0.0;
  for (const auto& b : h.bins) mass += b.mass;
  EXPECT_NEAR(mass, 1.0, 1e-12);
}

TEST(Histogram, ConstantMatrixHasOneBin) {
  const auto p = testing::illustrative_example();
  const auto h = delay_histogram(p, make_placement(p, {NodeId{0}, NodeId{1}, NodeId{2}}), TypeId{1}, 5.0);
  ASSERT_EQ(h.bins.size(), 1u);
  EXPECT_EQ(h.bins[0].mass, 1.0);
  EXPECT_EQ(h.bins[0].left_ms, 30.0);
}

TEST(Histogram, Errors) {
  EXPECT_THROW(histogram_of({}, 5.0), EmptyHistogram);
  EXPECT_THROW(histogram_of({1.0}, 0.0), InvalidSpec);
  PlacementProblem with_type({{TypeId{0}, ServiceClass::Cam, 20.0, {1.0, 1.0, 1.0}, 1}},
                             {{InstanceId{0}, TypeId{0}}}, {{NodeId{0}, Tier::Rsu, kRsu}}, 1,
                             DelayMatrix(1, 1, {3.0}));
  EXPECT_THROW(delay_samples(with_type, Placement{}, TypeId{0}), AssignmentIncomplete);
}

// Property: each type's delay histogram lies below its threshold when the
// placement is feasible, and carries |V| * |S_u| samples.
TEST(Histogram, SupportBelowThreshold) {
  for (const int vehicles : {140, 300}) {
    const auto p = instantiate(builtin_scenario(BuiltinScenario::Large, vehicles, 2));
    const auto r = solve_greedy(p);
    ASSERT_TRUE(r.feasible());
    for (const auto& t : p.types()) {
      const auto samples = delay_samples(p, *r.placement, t.id);
      EXPECT_EQ(samples.size(), p.vehicle_count() * p.instances_of(t.id).size());
      for (const double x : samples) EXPECT_LE(x, t.delay_threshold_ms);
      const auto h = delay_histogram(p, *r.placement, t.id, 5.0);
      double mass = 0.0;
      for (const auto& b : h.bins) mass += b.mass;
      EXPECT_NEAR(mass, 1.0, 1e-12);
    }
  }
}

TEST(Report, InfeasibleHasNoMetrics) {
  SolveResult r;
  r.infeasible_reason = "x";
  const auto p = testing::illustrative_example();
  const auto rep = make_report(p, r, SolverKind::Exact, 3);
  EXPECT_FALSE(rep.feasible);
  EXPECT_TRUE(rep.per_type_avg_delay_ms.empty());
  EXPECT_EQ(rep.seed, 3u);
}

TEST(Utilization, GrowsWithVehicleCount) {
  const auto lo = instantiate(builtin_scenario(BuiltinScenario::Small, 20, 1));
  const auto hi = instantiate(builtin_scenario(BuiltinScenario::Small, 100, 1));
  const auto ulo = utilization(lo, *solve_greedy(lo).placement);
  const auto uhi = utilization(hi, *solve_greedy(hi).placement);
  EXPECT_LT(ulo.at(Resource::Cpu), uhi.at(Resource::Cpu));
  EXPECT_LT(ulo.at(Resource::Memory), uhi.at(Resource::Memory));
}

}  // namespace
}  // namespace vsp
