#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/errors.hpp"
#include "vsp/model.hpp"
#include "vsp/rng.hpp"

namespace vsp {

enum class BuiltinScenario { Small, Large };

constexpr std::string_view to_string(BuiltinScenario b) {
  return b == BuiltinScenario::Small ? "SMALL" : "LARGE";
}

inline std::optional<BuiltinScenario> parse_builtin_scenario(std::string_view s) {
  if (s == "SMALL" || s == "small") return BuiltinScenario::Small;
  if (s == "LARGE" || s == "large") return BuiltinScenario::Large;
  return std::nullopt;
}

struct DelayRange {
  double low_ms = 0.0;
  double high_ms = 0.0;
};

struct ScenarioSpec {
  std::optional<BuiltinScenario> builtin;
  int lane_count = 2;
  double lane_length_km = 2.0;
  int vehicle_count = 20;
  int core_nodes = 0;
  int enb_nodes = 0;
  int rsu_nodes = 0;
  ResourceVector core_capacity;
  ResourceVector enb_capacity;
  ResourceVector rsu_capacity;
  // Threshold and demand per class. redundancy_requirement is ignored here
  // and derived from the vehicle count by instantiate().
  std::vector<UniqueServiceType> service_catalog;
  DelayRange core_delay;
  DelayRange enb_delay;
  DelayRange rsu_delay;
  // Instances per type = ceil(vehicle_count / vehicles_per_instance).
  int vehicles_per_instance = 20;
  std::uint64_t seed = 0;
  // Set when a built-in scenario is asked for a vehicle count outside its
  // standard list.
  bool nonstandard_vehicle_count = false;

  const DelayRange& delay_range(Tier t) const {
    switch (t) {
      case Tier::Core: return core_delay;
      case Tier::Enb: return enb_delay;
      case Tier::Rsu: return rsu_delay;
    }
    return core_delay;
  }

  void validate() const {
    if (vehicle_count < 1) throw InvalidSpec("vehicle_count must be >= 1");
    if (lane_count < 0 || core_nodes < 0 || enb_nodes < 0 || rsu_nodes < 0) {
      throw InvalidSpec("counts must be >= 0");
    }
    if (vehicles_per_instance < 1) throw InvalidSpec("vehicles_per_instance must be >= 1");
    for (const Tier t : {Tier::Core, Tier::Enb, Tier::Rsu}) {
      const auto& r = delay_range(t);
      if (!(r.low_ms > 0.0 && r.low_ms < r.high_ms && std::isfinite(r.high_ms))) {
        throw InvalidSpec(std::string(to_string(t)) +
                          " delay range must satisfy 0 < low < high");
      }
    }
    for (const auto& [cap, name] : {std::pair{&core_capacity, "core"},
                                    std::pair{&enb_capacity, "enb"},
                                    std::pair{&rsu_capacity, "rsu"}}) {
      if (!cap->all_positive()) throw InvalidSpec(std::string(name) + "_capacity must be > 0");
    }
    for (const auto& t : service_catalog) {
      if (!(t.delay_threshold_ms > 0.0)) throw InvalidSpec("service threshold must be > 0");
      if (!t.demand.all_positive()) throw InvalidSpec("service demand must be > 0");
    }
  }
};

inline std::vector<UniqueServiceType> default_service_catalog() {
  return {
      {TypeId{0}, ServiceClass::Cam, 20.0, {2.0, 3.5, 4.0}, 1},
      {TypeId{1}, ServiceClass::Denm, 50.0, {4.0, 7.0, 4.0}, 1},
      {TypeId{2}, ServiceClass::Media, 150.0, {8.0, 14.0, 40.0}, 1},
  };
}

inline std::vector<int> standard_vehicle_counts(BuiltinScenario which) {
  if (which == BuiltinScenario::Small) return {20, 40, 60, 80, 100};
  return {140, 180, 220, 260, 300};
}

// The two standard simulation setups.
inline ScenarioSpec builtin_scenario(BuiltinScenario which, int vehicle_count, std::uint64_t seed) {
  if (vehicle_count <= 0) throw InvalidSpec("vehicle_count must be >= 1");
  ScenarioSpec spec;
  spec.builtin = which;
  spec.lane_count = 2;
  spec.vehicle_count = vehicle_count;
  spec.core_capacity = {32.0, 64.0, 240.0};
  spec.enb_capacity = {8.0, 16.0, 240.0};
  spec.rsu_capacity = {8.0, 16.0, 240.0};
  spec.service_catalog = default_service_catalog();
  spec.rsu_delay = {1.0, 10.0};
  spec.enb_delay = {20.0, 40.0};
  spec.core_delay = {60.0, 130.0};
  spec.seed = seed;
  if (which == BuiltinScenario::Small) {
    spec.lane_length_km = 2.0;
    spec.core_nodes = 2;
    spec.enb_nodes = 3;
    spec.rsu_nodes = 5;
  } else {
    spec.lane_length_km = 8.0;
    spec.core_nodes = 7;
    spec.enb_nodes = 8;
    spec.rsu_nodes = 15;
  }
  const auto counts = standard_vehicle_counts(which);
  spec.nonstandard_vehicle_count =
      std::find(counts.begin(), counts.end(), vehicle_count) == counts.end();
  return spec;
}

inline int redundancy_for(const ScenarioSpec& spec) {
  return (spec.vehicle_count + spec.vehicles_per_instance - 1) / spec.vehicles_per_instance;
}

// Builds the problem: nodes ordered core, eNB, RSU; types in catalog order,
// each with ceil(V / vehicles_per_instance) instances listed contiguously;
// delay (v, c) drawn from U[low, high) of c's tier keyed by (seed, v, c).
inline PlacementProblem instantiate(const ScenarioSpec& spec) {
  spec.validate();
  std::vector<ComputeNode> nodes;
  const auto add_nodes = [&](int count, Tier tier, const ResourceVector& cap) {
    for (int i = 0; i < count; ++i) nodes.push_back({NodeId{nodes.size()}, tier, cap});
  };
  add_nodes(spec.core_nodes, Tier::Core, spec.core_capacity);
  add_nodes(spec.enb_nodes, Tier::Enb, spec.enb_capacity);
  add_nodes(spec.rsu_nodes, Tier::Rsu, spec.rsu_capacity);

  const int redundancy = redundancy_for(spec);
  if (!spec.service_catalog.empty() && static_cast<std::size_t>(redundancy) > nodes.size()) {
    throw InfeasibleSpec(std::to_string(spec.vehicle_count) + " vehicles need " +
                         std::to_string(redundancy) + " instances per type on distinct nodes, but only " +
                         std::to_string(nodes.size()) + " nodes exist");
  }

  std::vector<UniqueServiceType> types;
  std::vector<ServiceInstance> instances;
  for (std::size_t u = 0; u < spec.service_catalog.size(); ++u) {
    UniqueServiceType t = spec.service_catalog[u];
    t.id = TypeId{u};
    t.redundancy_requirement = redundancy;
    types.push_back(t);
    for (int k = 0; k < redundancy; ++k) {
      instances.push_back({InstanceId{instances.size()}, TypeId{u}});
    }
  }

  const auto n_vehicles = static_cast<std::size_t>(spec.vehicle_count);
  std::vector<double> delays(n_vehicles * nodes.size());
  for (std::size_t v = 0; v < n_vehicles; ++v) {
    for (std::size_t c = 0; c < nodes.size(); ++c) {
      const auto& range = spec.delay_range(nodes[c].tier);
      delays[v * nodes.size() + c] = keyed_uniform(spec.seed, {v, c}, range.low_ms, range.high_ms);
    }
  }
  DelayMatrix matrix(n_vehicles, nodes.size(), std::move(delays));
  return PlacementProblem(std::move(types), std::move(instances), std::move(nodes), n_vehicles,
                          std::move(matrix));
}

struct VehiclePosition {
  int lane = 0;
  double km = 0.0;
};

// Vehicles alternate between lanes and are evenly spaced along each lane.
// Informational only: delays do not depend on position.
inline std::vector<VehiclePosition> vehicle_positions(const ScenarioSpec& spec) {
  std::vector<VehiclePosition> out;
  if (spec.lane_count <= 0) return out;
  const int per_lane = (spec.vehicle_count + spec.lane_count - 1) / spec.lane_count;
  for (int i = 0; i < spec.vehicle_count; ++i) {
    const int slot = i / spec.lane_count;
    out.push_back({i % spec.lane_count,
                   (slot + 0.5) * spec.lane_length_km / static_cast<double>(per_lane)});
  }
  return out;
}

}  // namespace vsp
