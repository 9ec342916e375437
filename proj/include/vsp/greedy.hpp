#pragma once

#include <algorithm>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vsp/model.hpp"
#include "vsp/objective.hpp"
#include "vsp/solve_result.hpp"

namespace vsp {

// Which per-node delay statistic the greedy compares against a type's
// threshold. Max matches the optimization model's delay constraint; Mean only
// bounds the average and can return placements the model would reject.
enum class DelayCheck { Max, Mean };

constexpr std::string_view to_string(DelayCheck d) {
  return d == DelayCheck::Max ? "MAX" : "MEAN";
}

inline std::optional<DelayCheck> parse_delay_check(std::string_view s) {
  if (s == "MAX" || s == "max") return DelayCheck::Max;
  if (s == "MEAN" || s == "mean") return DelayCheck::Mean;
  return std::nullopt;
}

// Greedy V2X service placement.
//
// Types are visited from the least to the most delay tolerant (stable on
// equal thresholds). Each type starts with every node as a candidate. Each
// instance of the type takes the candidate with the lowest mean delay whose
// remaining capacity fits the demand and whose delay statistic is within the
// threshold; that node then leaves the type's candidate set. A node that
// fails the checks is skipped for this instance only. Ties on mean delay go
// to the lower node id.
//
// An instance that runs out of candidates makes the whole call infeasible.
inline SolveResult solve_greedy(const PlacementProblem& problem,
                                DelayCheck delay_check = DelayCheck::Max) {
  Stopwatch clock;
  SolveResult result;
  const auto types = problem.types();
  const auto nodes = problem.nodes();

  std::vector<std::size_t> type_order(types.size());
  std::iota(type_order.begin(), type_order.end(), std::size_t{0});
  std::stable_sort(type_order.begin(), type_order.end(), [&](std::size_t a, std::size_t b) {
    return types[a].delay_threshold_ms < types[b].delay_threshold_ms;
  });

  std::vector<std::size_t> node_order(nodes.size());
  std::iota(node_order.begin(), node_order.end(), std::size_t{0});
  std::stable_sort(node_order.begin(), node_order.end(), [&](std::size_t a, std::size_t b) {
    return problem.mean_delay(NodeId{a}) < problem.mean_delay(NodeId{b});
  });

  std::vector<ResourceVector> remaining(nodes.size());
  for (std::size_t c = 0; c < nodes.size(); ++c) remaining[c] = nodes[c].capacity;

  Assignment assignment(problem.instances().size());
  std::uint64_t evaluations = 0;
  std::vector<bool> candidate(nodes.size());

  for (const std::size_t u : type_order) {
    const auto& type = types[u];
    std::fill(candidate.begin(), candidate.end(), true);
    for (const InstanceId s : problem.instances_of(TypeId{u})) {
      std::optional<std::size_t> chosen;
      for (const std::size_t c : node_order) {
        if (!candidate[c]) continue;
        ++evaluations;
        const double stat = delay_check == DelayCheck::Max ? problem.max_delay(NodeId{c})
                                                           : problem.mean_delay(NodeId{c});
        if (type.demand.fits_in(remaining[c]) && stat <= type.delay_threshold_ms) {
          chosen = c;
          break;
        }
      }
      if (!chosen) {
        result.stats.nodes_explored = evaluations;
        result.stuck_instance = s;
        result.infeasible_reason = "instance " + std::to_string(s.value) + " (" +
                                   std::string(to_string(type.name)) +
                                   ") exhausted every candidate node";
        result.stats.runtime_ms = clock.elapsed_ms();
        return result;
      }
      assignment[s.value] = NodeId{*chosen};
      remaining[*chosen] -= type.demand;
      candidate[*chosen] = false;
    }
  }

  result.placement = make_placement(problem, std::move(assignment));
  result.stats.nodes_explored = evaluations;
  result.stats.runtime_ms = clock.elapsed_ms();
  return result;
}

}  // namespace vsp
