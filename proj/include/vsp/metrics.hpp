#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "vsp/errors.hpp"
#include "vsp/model.hpp"
#include "vsp/numeric.hpp"
#include "vsp/objective.hpp"
#include "vsp/solve_result.hpp"

namespace vsp {

// Mean over the type's instances of each instance's mean vehicle delay.
// Types without instances are omitted.
inline std::map<ServiceClass, double> per_type_avg_delay(const PlacementProblem& problem,
                                                         const Placement& placement) {
  std::map<ServiceClass, double> out;
  for (const auto& type : problem.types()) {
    const auto members = problem.instances_of(type.id);
    if (members.empty()) continue;
    ExactSum sum;
    for (const InstanceId s : members) {
      const auto c = placement.node_of(s);
      if (!c) throw AssignmentIncomplete("instance " + std::to_string(s.value) + " is unplaced");
      sum.add(problem.mean_delay(*c));
    }
    out[type.name] = sum.value() / static_cast<double>(members.size());
  }
  return out;
}

// Per resource: average over all nodes (empty ones included) of load / capacity.
inline std::map<Resource, double> utilization(const PlacementProblem& problem,
                                              const Placement& placement) {
  const auto nodes = problem.nodes();
  std::vector<ResourceVector> load(nodes.size());
  for (const auto& inst : problem.instances()) {
    if (const auto c = placement.node_of(inst.id)) {
      load[c->value] += problem.type(inst.type_ref).demand;
    }
  }
  std::map<Resource, double> out;
  for (const Resource r : kAllResources) {
    double sum = 0.0;
    for (std::size_t c = 0; c < nodes.size(); ++c) sum += load[c][r] / nodes[c].capacity[r];
    out[r] = nodes.empty() ? 0.0 : sum / static_cast<double>(nodes.size());
  }
  return out;
}

// Every (vehicle, instance of the type) delay sample, instances in input
// order, vehicles ascending within each instance.
inline std::vector<double> delay_samples(const PlacementProblem& problem,
                                         const Placement& placement, TypeId type) {
  std::vector<double> out;
  const auto& m = problem.delay_matrix();
  for (const InstanceId s : problem.instances_of(type)) {
    const auto c = placement.node_of(s);
    if (!c) throw AssignmentIncomplete("instance " + std::to_string(s.value) + " is unplaced");
    for (std::size_t v = 0; v < problem.vehicle_count(); ++v) out.push_back(m.at(v, *c));
  }
  return out;
}

struct HistogramBin {
  double left_ms = 0.0;
  double right_ms = 0.0;
  // Fraction of samples in [left, right). Masses sum to 1.
  double mass = 0.0;

  double density() const { return mass / (right_ms - left_ms); }
};

struct Histogram {
  double bin_width_ms = 5.0;
  std::vector<HistogramBin> bins;
};

// Bins are aligned to multiples of the width and span the smallest to the
// largest occupied bin.
inline Histogram histogram_of(const std::vector<double>& samples, double bin_width_ms) {
  if (!(bin_width_ms > 0.0)) throw InvalidSpec("bin width must be > 0");
  if (samples.empty()) throw EmptyHistogram("no delay samples");
  const auto bin_of = [&](double x) { return static_cast<long long>(std::floor(x / bin_width_ms)); };
  long long lo = bin_of(samples.front());
  long long hi = lo;
  for (double x : samples) {
    lo = std::min(lo, bin_of(x));
    hi = std::max(hi, bin_of(x));
  }
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(hi - lo + 1), 0);
  for (double x : samples) ++counts[static_cast<std::size_t>(bin_of(x) - lo)];

  Histogram h;
  h.bin_width_ms = bin_width_ms;
  const auto n = static_cast<double>(samples.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const double left = static_cast<double>(lo + static_cast<long long>(i)) * bin_width_ms;
    h.bins.push_back({left, left + bin_width_ms, static_cast<double>(counts[i]) / n});
  }
  return h;
}

inline Histogram delay_histogram(const PlacementProblem& problem, const Placement& placement,
                                 TypeId type, double bin_width_ms = 5.0) {
  if (problem.instances_of(type).empty()) {
    throw EmptyHistogram("type " + std::to_string(type.value) + " has no instances");
  }
  return histogram_of(delay_samples(problem, placement, type), bin_width_ms);
}

struct ExperimentReport {
  SolverKind solver = SolverKind::Greedy;
  std::uint64_t seed = 0;
  bool feasible = false;
  double aggregate_avg_delay_ms = 0.0;
  std::map<ServiceClass, double> per_type_avg_delay_ms;
  std::map<ServiceClass, std::size_t> per_type_instances;
  std::map<Resource, double> per_resource_utilization;
  std::map<ServiceClass, std::vector<double>> per_type_delay_samples_ms;
  double runtime_ms = 0.0;
  std::uint64_t nodes_explored = 0;
};

// Infeasible results yield a report with feasible = false and no metrics.
inline ExperimentReport make_report(const PlacementProblem& problem, const SolveResult& result,
                                    SolverKind solver, std::uint64_t seed) {
  ExperimentReport rep;
  rep.solver = solver;
  rep.seed = seed;
  rep.runtime_ms = result.stats.runtime_ms;
  rep.nodes_explored = result.stats.nodes_explored;
  rep.feasible = result.feasible();
  if (!rep.feasible) return rep;
  const Placement& p = *result.placement;
  rep.aggregate_avg_delay_ms = evaluate_objective(problem, p);
  rep.per_type_avg_delay_ms = per_type_avg_delay(problem, p);
  rep.per_resource_utilization = utilization(problem, p);
  for (const auto& type : problem.types()) {
    const auto n = problem.instances_of(type.id).size();
    if (n == 0) continue;
    rep.per_type_instances[type.name] = n;
    rep.per_type_delay_samples_ms[type.name] = delay_samples(problem, p, type.id);
  }
  return rep;
}

}  // namespace vsp
