#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "vsp/model.hpp"
#include "vsp/rng.hpp"

namespace vsp::testing {

// Builds a problem where node c has the same delay for every vehicle.
inline PlacementProblem constant_delay_problem(std::vector<UniqueServiceType> types,
                                               std::vector<ComputeNode> nodes,
                                               const std::vector<double>& node_delay,
                                               std::size_t vehicles) {
  std::vector<ServiceInstance> instances;
  for (const auto& t : types) {
    for (int k = 0; k < t.redundancy_requirement; ++k) {
      instances.push_back({InstanceId{instances.size()}, t.id});
    }
  }
  std::vector<double> delays;
  for (std::size_t v = 0; v < vehicles; ++v) {
    delays.insert(delays.end(), node_delay.begin(), node_delay.end());
  }
  const auto n = nodes.size();
  return PlacementProblem(std::move(types), std::move(instances), std::move(nodes), vehicles,
                          DelayMatrix(vehicles, n, std::move(delays)));
}

// Three services on core / eNB / RSU serving two vehicles. Instance 0 is the
// most tolerant service (150 ms), instance 2 the least (20 ms). Every node
// fits exactly one instance.
inline PlacementProblem illustrative_example() {
  const ResourceVector unit{1.0, 1.0, 1.0};
  return constant_delay_problem(
      {{TypeId{0}, ServiceClass::Media, 150.0, unit, 1},
       {TypeId{1}, ServiceClass::Denm, 50.0, unit, 1},
       {TypeId{2}, ServiceClass::Cam, 20.0, unit, 1}},
      {{NodeId{0}, Tier::Core, unit}, {NodeId{1}, Tier::Enb, unit}, {NodeId{2}, Tier::Rsu, unit}},
      {100.0, 30.0, 5.0}, 2);
}

// Direct transcription of the objective: sum over instances of
// (1/|V|) * sum over vehicles of the delay at the host. Deliberately naive.
inline double naive_objective(const PlacementProblem& p, const Assignment& a) {
  double total = 0.0;
  for (std::size_t s = 0; s < p.instances().size(); ++s) {
    double inner = 0.0;
    for (std::size_t v = 0; v < p.vehicle_count(); ++v) {
      inner += p.delay_matrix().data()[v * p.nodes().size() + a[s]->value];
    }
    total += inner / static_cast<double>(p.vehicle_count());
  }
  return total;
}

struct RandomProblemShape {
  std::size_t max_nodes = 4;
  std::size_t max_instances = 4;
  std::size_t max_vehicles = 6;
  std::size_t min_nodes = 1;
};

// Small random instance: random tiers and delays, thresholds and capacities
// drawn so that delay, capacity and anti-affinity all bind some of the time
// and some instances come out infeasible.
inline PlacementProblem random_problem(std::uint64_t seed, const RandomProblemShape& shape = {}) {
  SplitMix64 rng(seed);
  const std::size_t n_nodes = shape.min_nodes + rng.below(shape.max_nodes - shape.min_nodes + 1);
  const std::size_t n_vehicles = 1 + rng.below(shape.max_vehicles);

  std::vector<ComputeNode> nodes;
  const double tier_low[] = {60.0, 20.0, 1.0};
  const double tier_high[] = {130.0, 40.0, 10.0};
  std::vector<int> tiers;
  for (std::size_t c = 0; c < n_nodes; ++c) {
    const int t = static_cast<int>(rng.below(3));
    tiers.push_back(t);
    const double scale = t == 0 ? 4.0 : 1.0;
    nodes.push_back({NodeId{c}, static_cast<Tier>(t),
                     {scale * (4.0 + 8.0 * rng.uniform01()), scale * (8.0 + 12.0 * rng.uniform01()),
                      240.0}});
  }

  const ServiceClass classes[] = {ServiceClass::Cam, ServiceClass::Denm, ServiceClass::Media};
  const double thresholds[] = {20.0, 50.0, 150.0};
  const ResourceVector demands[] = {{2.0, 3.5, 4.0}, {4.0, 7.0, 4.0}, {8.0, 14.0, 40.0}};
  std::vector<UniqueServiceType> types;
  std::size_t budget = 1 + rng.below(shape.max_instances);
  for (std::size_t u = 0; u < 3 && budget > 0; ++u) {
    const std::size_t cap = std::min<std::size_t>(budget, n_nodes);
    const int red = static_cast<int>(1 + rng.below(cap));
    // Threshold jitter lets a tier straddle the limit.
    const double threshold = thresholds[u] * (0.6 + 0.8 * rng.uniform01());
    types.push_back({TypeId{types.size()}, classes[u], threshold, demands[u], red});
    budget -= static_cast<std::size_t>(red);
  }

  std::vector<ServiceInstance> instances;
  for (const auto& t : types) {
    for (int k = 0; k < t.redundancy_requirement; ++k) {
      instances.push_back({InstanceId{instances.size()}, t.id});
    }
  }

  std::vector<double> delays;
  for (std::size_t v = 0; v < n_vehicles; ++v) {
    for (std::size_t c = 0; c < n_nodes; ++c) {
      const int t = tiers[c];
      delays.push_back(tier_low[t] + (tier_high[t] - tier_low[t]) * rng.uniform01());
    }
  }
  return PlacementProblem(std::move(types), std::move(instances), std::move(nodes), n_vehicles,
                          DelayMatrix(n_vehicles, n_nodes, std::move(delays)));
}

inline Assignment random_total_assignment(const PlacementProblem& p, SplitMix64& rng) {
  Assignment a(p.instances().size());
  for (auto& x : a) x = NodeId{rng.below(p.nodes().size())};
  return a;
}

}  // namespace vsp::testing
