#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "vsp/errors.hpp"
#include "vsp/model.hpp"
#include "vsp/objective.hpp"
#include "vsp/rng.hpp"
#include "vsp/solve_result.hpp"

namespace vsp {

struct GaConfig {
  int population_size = 50;
  int generations = 200;
  int tournament_size = 3;
  double crossover_rate = 0.9;
  // Unset means 1 / |S|.
  std::optional<double> mutation_rate;
  double penalty_weight = 1e5;
  std::uint64_t seed = 1;

  void validate() const {
    if (population_size < 2) throw ConfigError("ga.population_size must be >= 2");
    if (generations < 0) throw ConfigError("ga.generations must be >= 0");
    if (tournament_size < 1) throw ConfigError("ga.tournament_size must be >= 1");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) {
      throw ConfigError("ga.crossover_rate must be in [0, 1]");
    }
    if (mutation_rate && !(*mutation_rate >= 0.0 && *mutation_rate <= 1.0)) {
      throw ConfigError("ga.mutation_rate must be in [0, 1]");
    }
    if (!(penalty_weight > 0.0)) throw ConfigError("ga.penalty_weight must be > 0");
  }
};

struct GaOutcome {
  SolveResult result;
  // Best penalized fitness seen so far, after the initial population (index
  // 0) and after each generation.
  std::vector<double> best_fitness_history;
  // Generation in which the first feasible individual appeared.
  std::optional<int> first_feasible_generation;
};

namespace detail {

// Penalized fitness: objective plus penalty_weight per violated delay,
// capacity or anti-affinity constraint. Chromosomes are always total, so the
// placement and redundancy families cannot fire.
inline double ga_fitness(const PlacementProblem& problem, const Assignment& genes,
                         double penalty_weight, bool& feasible) {
  const auto report = check_feasibility(problem, genes);
  const auto violations = report.count(Constraint::DelayThreshold) +
                          report.count(Constraint::Capacity) +
                          report.count(Constraint::AntiAffinity);
  feasible = violations == 0;
  return evaluate_objective(problem, genes) + penalty_weight * static_cast<double>(violations);
}

}  // namespace detail

// Genetic-algorithm baseline: integer chromosome (gene s = host of instance
// s), uniform random initial population, tournament selection, one-point
// crossover, per-gene uniform-reset mutation, elitism of one. Returns the
// best feasible individual ever evaluated.
inline GaOutcome run_ga(const PlacementProblem& problem, const GaConfig& config) {
  config.validate();
  Stopwatch clock;
  GaOutcome out;
  const std::size_t n_genes = problem.instances().size();
  const std::size_t n_nodes = problem.nodes().size();
  const auto pop_size = static_cast<std::size_t>(config.population_size);
  const double mutation_rate =
      config.mutation_rate.value_or(n_genes > 0 ? 1.0 / static_cast<double>(n_genes) : 0.0);

  if (n_genes > 0 && n_nodes == 0) {
    out.result.infeasible_reason = "no nodes";
    out.result.stats.runtime_ms = clock.elapsed_ms();
    return out;
  }

  SplitMix64 rng(config.seed);
  struct Individual {
    Assignment genes;
    double fitness = 0.0;
    bool feasible = false;
  };

  std::uint64_t evaluations = 0;
  double best_fitness = std::numeric_limits<double>::infinity();
  std::optional<Placement> best_feasible;

  const auto evaluate = [&](Individual& ind, int generation) {
    ind.fitness = detail::ga_fitness(problem, ind.genes, config.penalty_weight, ind.feasible);
    ++evaluations;
    best_fitness = std::min(best_fitness, ind.fitness);
    if (ind.feasible) {
      if (!out.first_feasible_generation) out.first_feasible_generation = generation;
      // Feasible fitness is the plain objective.
      if (!best_feasible || ind.fitness < best_feasible->objective_ms) {
        best_feasible = Placement{ind.genes, ind.fitness};
      }
    }
  };

  std::vector<Individual> population(pop_size);
  for (auto& ind : population) {
    ind.genes.resize(n_genes);
    for (auto& g : ind.genes) g = NodeId{rng.below(n_nodes)};
    evaluate(ind, 0);
  }
  out.best_fitness_history.push_back(best_fitness);

  const auto tournament = [&]() -> const Individual& {
    const Individual* winner = &population[rng.below(pop_size)];
    for (int k = 1; k < config.tournament_size; ++k) {
      const Individual& challenger = population[rng.below(pop_size)];
      if (challenger.fitness < winner->fitness) winner = &challenger;
    }
    return *winner;
  };

  const auto mutate = [&](Individual& ind) {
    for (auto& g : ind.genes) {
      if (rng.uniform01() < mutation_rate) g = NodeId{rng.below(n_nodes)};
    }
  };

  std::vector<Individual> next;
  next.reserve(pop_size + 1);
  for (int gen = 1; gen <= config.generations; ++gen) {
    next.clear();
    next.push_back(*std::min_element(
        population.begin(), population.end(),
        [](const Individual& a, const Individual& b) { return a.fitness < b.fitness; }));

    while (next.size() < pop_size) {
      Individual a{tournament().genes};
      Individual b{tournament().genes};
      if (n_genes >= 2 && rng.uniform01() < config.crossover_rate) {
        const std::size_t cut = 1 + rng.below(n_genes - 1);
        std::swap_ranges(a.genes.begin() + static_cast<std::ptrdiff_t>(cut), a.genes.end(),
                         b.genes.begin() + static_cast<std::ptrdiff_t>(cut));
      }
      mutate(a);
      evaluate(a, gen);
      next.push_back(std::move(a));
      if (next.size() < pop_size) {
        mutate(b);
        evaluate(b, gen);
        next.push_back(std::move(b));
      }
    }
    population.swap(next);
    out.best_fitness_history.push_back(best_fitness);
  }

  out.result.stats.nodes_explored = evaluations;
  if (best_feasible) {
    out.result.placement = std::move(best_feasible);
  } else {
    out.result.infeasible_reason = "no feasible individual in " +
                                   std::to_string(config.generations) + " generations";
  }
  out.result.stats.runtime_ms = clock.elapsed_ms();
  return out;
}

inline SolveResult solve_ga(const PlacementProblem& problem, const GaConfig& config = {}) {
  return run_ga(problem, config).result;
}

}  // namespace vsp
