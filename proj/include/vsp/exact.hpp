#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "vsp/errors.hpp"
#include "vsp/model.hpp"
#include "vsp/objective.hpp"
#include "vsp/solve_result.hpp"

namespace vsp {

struct ExactOptions {
  // Stop after visiting this many search nodes. The incumbent, if any, is
  // returned with proven_optimal = false.
  std::optional<std::uint64_t> node_budget;
};

namespace detail {

// Depth-first branch-and-bound over instances.
//
// Instances are branched in ascending order of their type's threshold (ties
// by id). Candidate hosts for an instance are the nodes passing its type's
// worst-case delay check, tried by ascending mean delay. Instances of one
// type are interchangeable, so their hosts are forced to increase by node
// index in instance order; this keeps exactly one representative of each
// symmetric family, and it is the lexicographically smallest one.
//
// Lower bound for a partial assignment: its cost plus, for every unplaced
// instance, the smallest mean delay among its delay-admissible nodes.
// Capacity is ignored, which keeps the bound admissible.
class BranchAndBound {
 public:
  BranchAndBound(const PlacementProblem& problem, const ExactOptions& options)
      : problem_(problem), options_(options) {}

  SolveResult run() {
    Stopwatch clock;
    SolveResult result;
    if (!prepare(result)) {
      result.stats.nodes_explored = 1;
      result.stats.proven_optimal = true;
      result.stats.runtime_ms = clock.elapsed_ms();
      return result;
    }
    dfs(0, 0.0);
    result.stats.nodes_explored = terminal_nodes_;
    result.stats.proven_optimal = !budget_hit_;
    if (best_) {
      result.placement = Placement{*best_, best_objective_};
    } else {
      result.infeasible_reason = budget_hit_ ? "node budget exhausted before any feasible placement"
                                             : "no placement satisfies all constraints";
    }
    result.stats.runtime_ms = clock.elapsed_ms();
    return result;
  }

 private:
  bool prepare(SolveResult& result) {
    const auto instances = problem_.instances();
    const auto nodes = problem_.nodes();
    const auto types = problem_.types();

    order_.resize(instances.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      return problem_.type_of(InstanceId{a}).delay_threshold_ms <
             problem_.type_of(InstanceId{b}).delay_threshold_ms;
    });

    candidates_.assign(types.size(), {});
    min_mean_.assign(types.size(), 0.0);
    for (std::size_t u = 0; u < types.size(); ++u) {
      auto& cands = candidates_[u];
      for (std::size_t c = 0; c < nodes.size(); ++c) {
        if (problem_.max_delay(NodeId{c}) <= types[u].delay_threshold_ms) cands.push_back(c);
      }
      std::stable_sort(cands.begin(), cands.end(), [&](std::size_t a, std::size_t b) {
        return problem_.mean_delay(NodeId{a}) < problem_.mean_delay(NodeId{b});
      });
      if (cands.empty()) {
        if (!problem_.instances_of(TypeId{u}).empty()) {
          result.infeasible_reason = "type " + std::to_string(u) +
                                     " has no node within its delay threshold";
          return false;
        }
        continue;
      }
      min_mean_[u] = problem_.mean_delay(NodeId{cands.front()});
    }

    suffix_bound_.assign(order_.size() + 1, 0.0);
    for (std::size_t k = order_.size(); k-- > 0;) {
      suffix_bound_[k] =
          suffix_bound_[k + 1] + min_mean_[instances[order_[k]].type_ref.value];
    }

    remaining_.resize(nodes.size());
    for (std::size_t c = 0; c < nodes.size(); ++c) remaining_[c] = nodes[c].capacity;
    last_host_.assign(types.size(), -1);
    current_.assign(instances.size(), std::nullopt);
    return true;
  }

  bool improves(double objective) const {
    if (!best_) return true;
    if (objective != best_objective_) return objective < best_objective_;
    return std::lexicographical_compare(current_.begin(), current_.end(), best_->begin(),
                                        best_->end());
  }

  // Prune only when the bound exceeds the incumbent by more than rounding
  // noise, so ties still reach the lexicographic comparison.
  bool prunable(double bound) const {
    return best_ && bound > best_objective_ + 1e-9 * std::max(1.0, std::fabs(best_objective_));
  }

  void dfs(std::size_t depth, double partial) {
    if (budget_hit_) return;
    ++visited_;
    if (options_.node_budget && visited_ > *options_.node_budget) {
      budget_hit_ = true;
      return;
    }
    if (depth == order_.size()) {
      ++terminal_nodes_;
      const double objective = evaluate_objective(problem_, current_);
      if (improves(objective)) {
        best_ = current_;
        best_objective_ = objective;
      }
      return;
    }

    const std::size_t s = order_[depth];
    const auto& type = problem_.type_of(InstanceId{s});
    const std::size_t u = type.id.value;
    const long previous = last_host_[u];
    bool expanded = false;

    for (const std::size_t c : candidates_[u]) {
      if (static_cast<long>(c) <= previous) continue;
      const double mean = problem_.mean_delay(NodeId{c});
      // Candidates are sorted by mean delay, so every later one is worse.
      if (prunable(partial + mean + suffix_bound_[depth + 1])) break;
      if (!type.demand.fits_in(remaining_[c])) continue;

      remaining_[c] -= type.demand;
      last_host_[u] = static_cast<long>(c);
      current_[s] = NodeId{c};
      expanded = true;
      dfs(depth + 1, partial + mean);
      current_[s] = std::nullopt;
      last_host_[u] = previous;
      remaining_[c] += type.demand;
      if (budget_hit_) return;
    }
    if (!expanded) ++terminal_nodes_;
  }

  const PlacementProblem& problem_;
  ExactOptions options_;

  std::vector<std::size_t> order_;
  std::vector<std::vector<std::size_t>> candidates_;
  std::vector<double> min_mean_;
  std::vector<double> suffix_bound_;
  std::vector<ResourceVector> remaining_;
  std::vector<long> last_host_;
  Assignment current_;

  std::optional<Assignment> best_;
  double best_objective_ = std::numeric_limits<double>::infinity();
  std::uint64_t visited_ = 0;
  std::uint64_t terminal_nodes_ = 0;
  bool budget_hit_ = false;
};

}  // namespace detail

// Proven-optimal placement by branch-and-bound, or an infeasibility verdict.
// Among equal-objective optima the lexicographically smallest assignment
// vector (instance input order) is returned.
inline SolveResult solve_exact(const PlacementProblem& problem, const ExactOptions& options = {}) {
  return detail::BranchAndBound(problem, options).run();
}

inline constexpr double kBruteForceLimit = 1e7;

// |C|^|S| as a double (saturates to +inf on overflow).
inline double assignment_space_size(const PlacementProblem& problem) {
  return std::pow(static_cast<double>(problem.nodes().size()),
                  static_cast<double>(problem.instances().size()));
}

// Enumerates every total assignment in lexicographic order and keeps the
// best feasible one. Independent of the branch-and-bound code path: it
// shares only the objective and the feasibility checker.
inline SolveResult solve_bruteforce(const PlacementProblem& problem) {
  const double space = assignment_space_size(problem);
  if (space > kBruteForceLimit) {
    throw SearchSpaceTooLarge("brute force would enumerate " + std::to_string(space) +
                              " assignments (limit 1e7)");
  }
  Stopwatch clock;
  SolveResult result;
  const std::size_t n_inst = problem.instances().size();
  const std::size_t n_nodes = problem.nodes().size();

  if (n_inst > 0 && n_nodes == 0) {
    result.infeasible_reason = "no nodes";
    result.stats.proven_optimal = true;
    result.stats.runtime_ms = clock.elapsed_ms();
    return result;
  }

  std::vector<std::size_t> digits(n_inst, 0);
  // Odometer with instance 0 as the most significant digit; false on wrap.
  const auto advance = [&] {
    for (std::size_t pos = n_inst; pos-- > 0;) {
      if (++digits[pos] < n_nodes) return true;
      digits[pos] = 0;
    }
    return false;
  };

  Assignment assignment(n_inst);
  std::optional<Placement> best;
  std::uint64_t enumerated = 0;
  do {
    ++enumerated;
    for (std::size_t s = 0; s < n_inst; ++s) assignment[s] = NodeId{digits[s]};
    if (check_feasibility(problem, assignment).feasible()) {
      const double objective = evaluate_objective(problem, assignment);
      // Strict improvement keeps the lexicographically first optimum.
      if (!best || objective < best->objective_ms) best = Placement{assignment, objective};
    }
  } while (advance());

  result.stats.nodes_explored = enumerated;
  result.stats.proven_optimal = true;
  if (best) {
    result.placement = std::move(best);
  } else {
    result.infeasible_reason = "no placement satisfies all constraints";
  }
  result.stats.runtime_ms = clock.elapsed_ms();
  return result;
}

}  // namespace vsp
