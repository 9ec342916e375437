// Command-line front end: gen, solve, validate, sweep.
//
// Exit codes: 0 success, 1 infeasible result or constraint violations,
// 2 usage, parse, configuration or I/O error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "vsp/vsp.hpp"

namespace {

constexpr int kExitInfeasible = 1;
constexpr int kExitError = 2;

void emit(const nlohmann::json& j, const std::string& out_path) {
  if (out_path.empty() || out_path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    vsp::json::write_file(out_path, j);
  }
}

struct GaFlags {
  std::optional<int> population;
  std::optional<int> generations;
  std::optional<int> tournament;
  std::optional<double> crossover;
  std::optional<double> mutation;
  std::optional<double> penalty;
  std::optional<std::uint64_t> seed;

  void attach(CLI::App* app) {
    app->add_option("--ga-population", population, "GA population size (default 50)");
    app->add_option("--ga-generations", generations, "GA generations (default 200)");
    app->add_option("--ga-tournament", tournament, "GA tournament size (default 3)");
    app->add_option("--ga-crossover", crossover, "GA crossover rate (default 0.9)");
    app->add_option("--ga-mutation", mutation, "GA per-gene mutation rate (default 1/|S|)");
    app->add_option("--ga-penalty", penalty, "GA penalty per violation in ms (default 1e5)");
    app->add_option("--ga-seed", seed, "GA seed (solve only; sweeps derive it per run)");
  }

  void apply(vsp::GaConfig& c) const {
    if (population) c.population_size = *population;
    if (generations) c.generations = *generations;
    if (tournament) c.tournament_size = *tournament;
    if (crossover) c.crossover_rate = *crossover;
    if (mutation) c.mutation_rate = *mutation;
    if (penalty) c.penalty_weight = *penalty;
    if (seed) c.seed = *seed;
  }
};

vsp::BuiltinScenario scenario_or_throw(const std::string& name) {
  const auto s = vsp::parse_builtin_scenario(name);
  if (!s) throw vsp::ConfigError("unknown scenario '" + name + "' (expected small or large)");
  return *s;
}

vsp::DelayCheck delay_check_or_throw(const std::string& name) {
  const auto d = vsp::parse_delay_check(name);
  if (!d) throw vsp::ConfigError("unknown delay check '" + name + "' (expected max or mean)");
  return *d;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"V2X service placement: exact, greedy and genetic solvers plus experiment sweeps"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Emit a problem file from a scenario");
  std::string gen_scenario = "small";
  int gen_vehicles = 20;
  std::uint64_t gen_seed = 0;
  std::string gen_spec;
  std::string gen_out;
  bool gen_positions = false;
  gen->add_option("--scenario", gen_scenario, "Built-in scenario: small or large")->capture_default_str();
  gen->add_option("--vehicles", gen_vehicles, "Vehicle count")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Delay sampling seed")->capture_default_str();
  gen->add_option("--spec", gen_spec, "ScenarioSpec JSON file (overrides --scenario)");
  gen->add_option("-o,--out", gen_out, "Output file (default stdout)");
  gen->add_flag("--positions", gen_positions, "Include informational vehicle positions");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve one problem file");
  std::string solve_problem;
  std::string solve_solver = "greedy";
  std::string solve_check = "max";
  std::optional<std::uint64_t> solve_budget;
  std::string solve_out;
  GaFlags solve_ga;
  solve->add_option("-p,--problem", solve_problem, "Problem JSON file")->required();
  solve->add_option("-s,--solver", solve_solver, "exact, greedy, ga or bruteforce")->capture_default_str();
  solve->add_option("--delay-check", solve_check, "Greedy delay statistic: max or mean")->capture_default_str();
  solve->add_option("--node-budget", solve_budget, "Exact solver node budget");
  solve->add_option("-o,--out", solve_out, "Output file (default stdout)");
  solve_ga.attach(solve);

  // validate
  auto* validate = app.add_subcommand("validate", "Check a placement against a problem");
  std::string val_problem;
  std::string val_placement;
  validate->add_option("-p,--problem", val_problem, "Problem JSON file")->required();
  validate->add_option("-a,--placement", val_placement, "Placement JSON file")->required();

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Run an experiment sweep");
  std::string sw_config;
  std::optional<std::string> sw_scenario;
  std::vector<int> sw_vehicles;
  std::vector<std::string> sw_solvers;
  std::optional<int> sw_reps;
  std::optional<std::uint64_t> sw_seed;
  std::optional<std::string> sw_out;
  std::optional<std::string> sw_check;
  std::optional<std::uint64_t> sw_budget;
  std::optional<double> sw_bin;
  bool sw_force_exact = false;
  bool sw_json = false;
  GaFlags sw_ga;
  sweep->add_option("-c,--config", sw_config, "RunConfig JSON file");
  sweep->add_option("--scenario", sw_scenario, "Built-in scenario: small or large");
  sweep->add_option("--vehicles", sw_vehicles, "Vehicle counts")->delimiter(',');
  sweep->add_option("--solvers", sw_solvers, "Subset of exact,greedy,ga")->delimiter(',');
  sweep->add_option("--reps", sw_reps, "Repetitions per vehicle count (default 100)");
  sweep->add_option("--seed", sw_seed, "Master seed (default 1)");
  sweep->add_option("-o,--out", sw_out, "Output directory");
  sweep->add_option("--greedy-check", sw_check, "Greedy delay statistic: max or mean");
  sweep->add_option("--node-budget", sw_budget, "Exact node budget (default 1e6)");
  sweep->add_option("--bin-width", sw_bin, "Histogram bin width in ms (default 5)");
  sweep->add_flag("--force-exact", sw_force_exact, "Run EXACT even when projected too large");
  sweep->add_flag("--json", sw_json, "Also write runs.json and summary.json");
  sw_ga.attach(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help exits 0; every other parse failure is a usage error.
    return app.exit(e) == 0 ? 0 : kExitError;
  }

  try {
    if (gen->parsed()) {
      vsp::ScenarioSpec spec =
          gen_spec.empty()
              ? vsp::builtin_scenario(scenario_or_throw(gen_scenario), gen_vehicles, gen_seed)
              : vsp::json::scenario_from_json(vsp::json::read_file(gen_spec));
      if (spec.nonstandard_vehicle_count) {
        std::cerr << "warning: " << spec.vehicle_count << " vehicles is not a standard "
                  << vsp::to_string(*spec.builtin) << " setting\n";
      }
      auto j = vsp::json::to_json(vsp::instantiate(spec));
      j["scenario"] = vsp::json::to_json(spec);
      if (gen_positions) j["vehicle_positions"] = vsp::json::to_json(vsp::vehicle_positions(spec));
      emit(j, gen_out);
      return 0;
    }

    if (solve->parsed()) {
      const auto problem = vsp::json::problem_from_json(vsp::json::read_file(solve_problem));
      const auto kind = vsp::parse_solver_kind(solve_solver);
      if (!kind) throw vsp::ConfigError("unknown solver '" + solve_solver + "'");
      vsp::SolveResult result;
      switch (*kind) {
        case vsp::SolverKind::Exact: {
          vsp::ExactOptions opts;
          opts.node_budget = solve_budget;
          result = vsp::solve_exact(problem, opts);
          break;
        }
        case vsp::SolverKind::BruteForce:
          result = vsp::solve_bruteforce(problem);
          break;
        case vsp::SolverKind::Greedy:
          result = vsp::solve_greedy(problem, delay_check_or_throw(solve_check));
          break;
        case vsp::SolverKind::Ga: {
          vsp::GaConfig ga;
          solve_ga.apply(ga);
          result = vsp::solve_ga(problem, ga);
          break;
        }
      }
      emit(vsp::json::to_json(result, *kind), solve_out);
      if (!result.feasible()) {
        std::cerr << "infeasible: " << result.infeasible_reason << '\n';
        return kExitInfeasible;
      }
      return 0;
    }

    if (validate->parsed()) {
      const auto outcome = vsp::validate_placement_file(val_problem, val_placement);
      auto j = vsp::json::to_json(outcome.report);
      j["objective_ms"] = outcome.objective_ms ? nlohmann::json(*outcome.objective_ms) : nlohmann::json(nullptr);
      std::cout << j.dump(2) << '\n';
      for (const auto& v : outcome.report.violations) std::cerr << "violation: " << v.describe() << '\n';
      return outcome.report.feasible() ? 0 : kExitInfeasible;
    }

    if (sweep->parsed()) {
      vsp::RunConfig config;
      if (!sw_config.empty()) {
        try {
          config = vsp::run_config_from_json(vsp::json::read_file(sw_config));
        } catch (const vsp::ParseError& e) {
          throw vsp::ParseError(sw_config + ":" + e.what());
        }
      }
      if (sw_scenario) config.scenario = vsp::builtin_scenario(scenario_or_throw(*sw_scenario), 20, 0);
      if (!sw_vehicles.empty()) config.vehicle_counts = sw_vehicles;
      if (!sw_solvers.empty()) {
        config.solvers.clear();
        for (const auto& s : sw_solvers) {
          const auto k = vsp::parse_solver_kind(s);
          if (!k) throw vsp::ConfigError("unknown solver '" + s + "'");
          config.solvers.push_back(*k);
        }
      }
      if (sw_reps) config.repetitions = *sw_reps;
      if (sw_seed) config.master_seed = *sw_seed;
      if (sw_out) config.output_dir = *sw_out;
      if (sw_check) config.greedy_delay_check = delay_check_or_throw(*sw_check);
      if (sw_budget) config.exact_node_budget = *sw_budget;
      if (sw_bin) config.histogram_bin_width_ms = *sw_bin;
      if (sw_force_exact) config.force_exact = true;
      if (sw_json) config.write_json = true;
      sw_ga.apply(config.ga);

      const auto summary = vsp::run_sweep(config);
      for (const auto& w : summary.warnings) std::cerr << "warning: " << w << '\n';
      std::cout << fmt::format("{:>8} {:>7} {:>9} {:>12} {:>9} {:>9} {:>9} {:>8} {:>8} {:>11}\n",
                               "vehicles", "solver", "feasible", "agg_delay", "cam", "denm",
                               "media", "cpu", "memory", "runtime_ms");
      for (const auto& r : summary.summary) {
        const auto td = [&](vsp::ServiceClass c) {
          const auto it = r.type_delay.find(c);
          return it == r.type_delay.end() ? 0.0 : it->second.mean;
        };
        const auto ut = [&](vsp::Resource res) {
          const auto it = r.util.find(res);
          return it == r.util.end() ? 0.0 : it->second.mean;
        };
        std::cout << fmt::format("{:>8} {:>7} {:>4}/{:<4} {:>12.3f} {:>9.3f} {:>9.3f} {:>9.3f} {:>8.3f} {:>8.3f} {:>11.4f}\n",
                                 r.vehicle_count, vsp::to_string(r.solver), r.feasible_runs, r.runs,
                                 r.aggregate_delay.mean, td(vsp::ServiceClass::Cam),
                                 td(vsp::ServiceClass::Denm), td(vsp::ServiceClass::Media),
                                 ut(vsp::Resource::Cpu), ut(vsp::Resource::Memory), r.runtime.mean);
      }
      if (!config.output_dir.empty()) std::cerr << "wrote " << config.output_dir << '\n';
      return 0;
    }
  } catch (const vsp::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return 0;
}
