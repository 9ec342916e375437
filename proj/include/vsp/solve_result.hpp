#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "vsp/model.hpp"

namespace vsp {

enum class SolverKind { Exact, Greedy, Ga, BruteForce };

constexpr std::string_view to_string(SolverKind k) {
  switch (k) {
    case SolverKind::Exact: return "EXACT";
    case SolverKind::Greedy: return "GREEDY";
    case SolverKind::Ga: return "GA";
    case SolverKind::BruteForce: return "BRUTEFORCE";
  }
  return "?";
}

inline std::optional<SolverKind> parse_solver_kind(std::string_view s) {
  if (s == "EXACT" || s == "exact") return SolverKind::Exact;
  if (s == "GREEDY" || s == "greedy") return SolverKind::Greedy;
  if (s == "GA" || s == "ga") return SolverKind::Ga;
  if (s == "BRUTEFORCE" || s == "bruteforce") return SolverKind::BruteForce;
  return std::nullopt;
}

// What `nodes_explored` counts depends on the solver:
//   exact       terminal nodes of the explored search tree
//   bruteforce  complete assignments enumerated
//   greedy      (instance, node) candidate evaluations
//   ga          fitness evaluations
struct SolveStats {
  std::uint64_t nodes_explored = 0;
  double runtime_ms = 0.0;
  bool proven_optimal = false;
};

// Either a placement or an infeasibility verdict; stats are always filled.
struct SolveResult {
  std::optional<Placement> placement;
  SolveStats stats;
  std::string infeasible_reason;
  // Greedy only: the instance that ran out of candidate nodes.
  std::optional<InstanceId> stuck_instance;

  bool feasible() const { return placement.has_value(); }
};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}

  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

}  // namespace vsp
