#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/errors.hpp"
#include "vsp/model.hpp"
#include "vsp/numeric.hpp"

namespace vsp {

// Sum over instances of the mean vehicle delay at the hosting node. The sum
// is correctly rounded, so relabeling instances or swapping same-type hosts
// never changes the value by even one ulp. Solvers rely on this to compare
// objectives exactly.
inline double evaluate_objective(const PlacementProblem& problem, const Assignment& assignment) {
  const auto instances = problem.instances();
  if (assignment.size() > instances.size()) {
    throw InvalidProblem("assignment lists " + std::to_string(assignment.size()) +
                         " instances, problem has " + std::to_string(instances.size()));
  }
  for (std::size_t s = 0; s < instances.size(); ++s) {
    if (s >= assignment.size() || !assignment[s] ||
        assignment[s]->value >= problem.nodes().size()) {
      throw AssignmentIncomplete("instance " + std::to_string(s) +
                                 " is not assigned to an existing node");
    }
  }
  if (problem.vehicle_count() == 0) {
    throw DegenerateProblem("objective is undefined with zero vehicles");
  }
  ExactSum total;
  for (std::size_t s = 0; s < instances.size(); ++s) {
    total.add(problem.mean_delay(*assignment[s]));
  }
  return total.value();
}

inline double evaluate_objective(const PlacementProblem& problem, const Placement& placement) {
  return evaluate_objective(problem, placement.assignment);
}

// Builds a Placement with its objective filled in. Requires a total assignment.
inline Placement make_placement(const PlacementProblem& problem, Assignment assignment) {
  Placement p{std::move(assignment)};
  p.objective_ms = evaluate_objective(problem, p.assignment);
  return p;
}

enum class Constraint {
  DelayThreshold,  // max vehicle delay at the host <= type threshold
  Capacity,        // per node, per resource dimension
  Redundancy,      // placed instances per type >= requirement
  AntiAffinity,    // at most one instance of a type per node
  SinglePlacement  // every instance on exactly one existing node
};

constexpr std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::DelayThreshold: return "delay-threshold";
    case Constraint::Capacity: return "capacity";
    case Constraint::Redundancy: return "redundancy";
    case Constraint::AntiAffinity: return "anti-affinity";
    case Constraint::SinglePlacement: return "single-placement";
  }
  return "?";
}

struct Violation {
  Constraint constraint;
  std::optional<InstanceId> instance;
  std::optional<NodeId> node;
  std::optional<TypeId> type;
  std::optional<Resource> resource;
  // Observed quantity and the limit it broke (delay ms, resource units,
  // instance count). Unused for single-placement.
  double observed = 0.0;
  double limit = 0.0;

  std::string describe() const {
    std::string out{to_string(constraint)};
    if (instance) out += " instance=" + std::to_string(instance->value);
    if (node) out += " node=" + std::to_string(node->value);
    if (type) out += " type=" + std::to_string(type->value);
    if (resource) out += " resource=" + std::string(to_string(*resource));
    if (constraint != Constraint::SinglePlacement) {
      out += " observed=" + std::to_string(observed) + " limit=" + std::to_string(limit);
    }
    return out;
  }
};

struct FeasibilityReport {
  std::vector<Violation> violations;

  bool feasible() const { return violations.empty(); }

  std::size_t count(Constraint c) const {
    std::size_t n = 0;
    for (const auto& v : violations) n += v.constraint == c;
    return n;
  }
};

// Checks every constraint family. Violations are data: nothing here throws.
// Unplaced instances (or ones pointing at a nonexistent node) count as
// single-placement violations and are skipped by the other families.
inline FeasibilityReport check_feasibility(const PlacementProblem& problem,
                                           const Assignment& assignment) {
  FeasibilityReport report;
  const auto instances = problem.instances();
  const auto nodes = problem.nodes();
  const auto types = problem.types();

  std::vector<ResourceVector> load(nodes.size());
  std::vector<int> placed_per_type(types.size(), 0);
  // hosted[u * |C| + c] counts instances of type u on node c.
  std::vector<int> hosted(types.size() * nodes.size(), 0);

  for (std::size_t s = 0; s < instances.size(); ++s) {
    const InstanceId sid{s};
    const auto c = s < assignment.size() ? assignment[s] : std::nullopt;
    if (!c || c->value >= nodes.size()) {
      report.violations.push_back({Constraint::SinglePlacement, sid, c, instances[s].type_ref,
                                   std::nullopt, 0.0, 1.0});
      continue;
    }
    const auto& type = problem.type_of(sid);
    const double worst = problem.max_delay(*c);
    if (worst > type.delay_threshold_ms) {
      report.violations.push_back({Constraint::DelayThreshold, sid, c, type.id, std::nullopt,
                                   worst, type.delay_threshold_ms});
    }
    load[c->value] += type.demand;
    ++placed_per_type[type.id.value];
    ++hosted[type.id.value * nodes.size() + c->value];
  }

  for (std::size_t c = 0; c < nodes.size(); ++c) {
    for (const Resource r : kAllResources) {
      if (load[c][r] > nodes[c].capacity[r]) {
        report.violations.push_back({Constraint::Capacity, std::nullopt, NodeId{c}, std::nullopt,
                                     r, load[c][r], nodes[c].capacity[r]});
      }
    }
  }

  for (std::size_t u = 0; u < types.size(); ++u) {
    if (placed_per_type[u] < types[u].redundancy_requirement) {
      report.violations.push_back({Constraint::Redundancy, std::nullopt, std::nullopt, TypeId{u},
                                   std::nullopt, static_cast<double>(placed_per_type[u]),
                                   static_cast<double>(types[u].redundancy_requirement)});
    }
    for (std::size_t c = 0; c < nodes.size(); ++c) {
      const int n = hosted[u * nodes.size() + c];
      if (n > 1) {
        report.violations.push_back({Constraint::AntiAffinity, std::nullopt, NodeId{c}, TypeId{u},
                                     std::nullopt, static_cast<double>(n), 1.0});
      }
    }
  }
  return report;
}

inline FeasibilityReport check_feasibility(const PlacementProblem& problem,
                                           const Placement& placement) {
  return check_feasibility(problem, placement.assignment);
}

}  // namespace vsp
