#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "vsp/errors.hpp"
#include "vsp/exact.hpp"
#include "vsp/ga.hpp"
#include "vsp/greedy.hpp"
#include "vsp/json_io.hpp"
#include "vsp/metrics.hpp"
#include "vsp/rng.hpp"
#include "vsp/scenario.hpp"

namespace vsp {

struct RunConfig {
  ScenarioSpec scenario = builtin_scenario(BuiltinScenario::Small, 20, 0);
  // Empty means the built-in scenario's standard list (or the scenario's
  // own vehicle_count for custom specs).
  std::vector<int> vehicle_counts;
  std::vector<SolverKind> solvers = {SolverKind::Exact, SolverKind::Greedy, SolverKind::Ga};
  int repetitions = 100;
  std::uint64_t master_seed = 1;
  std::string output_dir;  // empty: nothing is written
  DelayCheck greedy_delay_check = DelayCheck::Max;
  GaConfig ga;
  bool force_exact = false;
  // Upper limit on the projected branch-and-bound tree before EXACT is
  // skipped, and the hard node budget when it is forced.
  std::uint64_t exact_node_budget = 1'000'000;
  double histogram_bin_width_ms = 5.0;
  bool write_json = false;

  void validate() const {
    if (repetitions < 1) throw ConfigError("repetitions must be >= 1");
    if (solvers.empty()) throw ConfigError("at least one solver is required");
    for (const auto s : solvers) {
      if (s == SolverKind::BruteForce) throw ConfigError("BRUTEFORCE is not a sweep solver");
    }
    for (const int v : vehicle_counts) {
      if (v < 1) throw ConfigError("vehicle counts must be >= 1");
    }
    if (!(histogram_bin_width_ms > 0.0)) throw ConfigError("histogram bin width must be > 0");
    ga.validate();
  }

  std::vector<int> effective_vehicle_counts() const {
    std::vector<int> out = vehicle_counts;
    if (out.empty()) {
      out = scenario.builtin ? standard_vehicle_counts(*scenario.builtin)
                             : std::vector<int>{scenario.vehicle_count};
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }
};

// Scenario randomness for (vehicle count, repetition) depends only on these
// three numbers, so adding or removing a solver never shifts it.
inline std::uint64_t child_seed(std::uint64_t master_seed, int vehicle_count, int repetition) {
  return derive_key(master_seed, {static_cast<std::uint64_t>(vehicle_count),
                                  static_cast<std::uint64_t>(repetition)});
}

// GA stream for a run, split off the run's scenario seed.
inline std::uint64_t ga_seed_for(std::uint64_t run_seed) {
  return derive_key(run_seed, {0x6761});
}

// Leaves of the symmetry-reduced search tree with capacity ignored:
// prod over types of C(#delay-admissible nodes, #instances).
inline double projected_exact_tree(const PlacementProblem& problem) {
  double total = 1.0;
  for (const auto& type : problem.types()) {
    std::size_t admissible = 0;
    for (const auto& n : problem.nodes()) {
      admissible += problem.max_delay(n.id) <= type.delay_threshold_ms;
    }
    const std::size_t k = problem.instances_of(type.id).size();
    if (k > admissible) return 0.0;
    double binom = 1.0;
    for (std::size_t i = 0; i < k; ++i) {
      binom = binom * static_cast<double>(admissible - i) / static_cast<double>(i + 1);
    }
    total *= binom;
  }
  return total;
}

struct RunRow {
  int vehicle_count = 0;
  int repetition = 0;
  std::uint64_t seed = 0;
  std::size_t instances = 0;
  std::size_t nodes = 0;
  ExperimentReport report;
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;
};

inline Stat mean_std(const std::vector<double>& xs) {
  Stat s;
  if (xs.empty()) return s;
  s.mean = exact_sum(xs) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double acc = 0.0;
    for (double x : xs) acc += (x - s.mean) * (x - s.mean);
    s.stddev = std::sqrt(acc / static_cast<double>(xs.size() - 1));
  }
  return s;
}

struct SummaryRow {
  int vehicle_count = 0;
  SolverKind solver = SolverKind::Greedy;
  int runs = 0;
  int feasible_runs = 0;
  Stat aggregate_delay;
  std::map<ServiceClass, Stat> type_delay;
  std::map<Resource, Stat> util;
  Stat nodes_explored;
  Stat runtime;
};

struct SweepSummary {
  std::vector<RunRow> rows;
  std::vector<SummaryRow> summary;
  // (solver, class, vehicle count) -> pooled histogram over feasible runs.
  std::map<std::tuple<SolverKind, ServiceClass, int>, Histogram> histograms;
  std::vector<std::string> warnings;

  const SummaryRow* find(int vehicle_count, SolverKind solver) const {
    for (const auto& s : summary) {
      if (s.vehicle_count == vehicle_count && s.solver == solver) return &s;
    }
    return nullptr;
  }
};

// Called once per solver run with the instantiated problem and raw result.
using RunObserver =
    std::function<void(const PlacementProblem&, SolverKind, const SolveResult&, const RunRow&)>;

namespace detail {

constexpr std::array<ServiceClass, 3> kClasses = {ServiceClass::Cam, ServiceClass::Denm,
                                                  ServiceClass::Media};

inline std::string csv_number(double x) { return fmt::format("{}", x); }

inline std::string csv_optional(const std::map<ServiceClass, double>& m, ServiceClass c) {
  const auto it = m.find(c);
  return it == m.end() ? std::string() : csv_number(it->second);
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& ch : out) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return out;
}

}  // namespace detail

// Runtime is always the last column, so the deterministic part of a row is
// everything before the final comma.
inline std::string runs_csv(const SweepSummary& s) {
  std::string out =
      "vehicle_count,repetition,seed,solver,feasible,instances,nodes,aggregate_avg_delay_ms,"
      "delay_cam_ms,delay_denm_ms,delay_media_ms,util_cpu,util_memory,util_storage,"
      "nodes_explored,runtime_ms\n";
  for (const auto& r : s.rows) {
    const auto& rep = r.report;
    const auto util = [&](Resource res) {
      const auto it = rep.per_resource_utilization.find(res);
      return it == rep.per_resource_utilization.end() ? std::string() : detail::csv_number(it->second);
    };
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.vehicle_count,
                       r.repetition, r.seed, to_string(rep.solver), rep.feasible ? 1 : 0,
                       r.instances, r.nodes,
                       rep.feasible ? detail::csv_number(rep.aggregate_avg_delay_ms) : "",
                       detail::csv_optional(rep.per_type_avg_delay_ms, ServiceClass::Cam),
                       detail::csv_optional(rep.per_type_avg_delay_ms, ServiceClass::Denm),
                       detail::csv_optional(rep.per_type_avg_delay_ms, ServiceClass::Media),
                       util(Resource::Cpu), util(Resource::Memory), util(Resource::Storage),
                       rep.nodes_explored, detail::csv_number(rep.runtime_ms));
  }
  return out;
}

// Runtime mean and stddev are the last two columns.
inline std::string summary_csv(const SweepSummary& s) {
  std::string out =
      "vehicle_count,solver,runs,feasible_runs,aggregate_avg_delay_ms_mean,"
      "aggregate_avg_delay_ms_std,delay_cam_ms_mean,delay_cam_ms_std,delay_denm_ms_mean,"
      "delay_denm_ms_std,delay_media_ms_mean,delay_media_ms_std,util_cpu_mean,util_cpu_std,"
      "util_memory_mean,util_memory_std,util_storage_mean,util_storage_std,"
      "nodes_explored_mean,nodes_explored_std,runtime_ms_mean,runtime_ms_std\n";
  const auto pair = [](const Stat& st) {
    return detail::csv_number(st.mean) + "," + detail::csv_number(st.stddev);
  };
  for (const auto& r : s.summary) {
    out += fmt::format("{},{},{},{}", r.vehicle_count, to_string(r.solver), r.runs, r.feasible_runs);
    out += "," + pair(r.aggregate_delay);
    for (const auto c : detail::kClasses) {
      const auto it = r.type_delay.find(c);
      out += "," + (it == r.type_delay.end() ? std::string(",") : pair(it->second));
    }
    for (const auto res : kAllResources) {
      const auto it = r.util.find(res);
      out += "," + (it == r.util.end() ? std::string(",") : pair(it->second));
    }
    out += "," + pair(r.nodes_explored);
    out += "," + pair(r.runtime) + "\n";
  }
  return out;
}

inline std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_left,bin_right,density\n";
  for (const auto& b : h.bins) {
    out += fmt::format("{},{},{}\n", detail::csv_number(b.left_ms), detail::csv_number(b.right_ms),
                       detail::csv_number(b.density()));
  }
  return out;
}

inline void write_text(const std::filesystem::path& file, const std::string& text) {
  std::ofstream out(file, std::ios::binary);
  if (!out) throw Error(file.string() + ": cannot open for writing");
  out << text;
  if (!out) throw Error(file.string() + ": write failed");
}

inline void write_sweep(const SweepSummary& s, const RunConfig& config) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir / "histograms", ec);
  if (ec) throw Error(dir.string() + ": " + ec.message());
  write_text(dir / "runs.csv", runs_csv(s));
  write_text(dir / "summary.csv", summary_csv(s));
  for (const auto& [key, h] : s.histograms) {
    const auto& [solver, cls, vehicles] = key;
    write_text(dir / "histograms" /
                   fmt::format("{}_{}_v{}.csv", detail::lower(to_string(solver)),
                               detail::lower(to_string(cls)), vehicles),
               histogram_csv(h));
  }
  if (config.write_json) {
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& r : s.rows) {
      auto j = json::to_json(r.report);
      j["vehicle_count"] = r.vehicle_count;
      j["repetition"] = r.repetition;
      runs.push_back(std::move(j));
    }
    json::write_file((dir / "runs.json").string(), runs);
    nlohmann::json summary = nlohmann::json::array();
    for (const auto& r : s.summary) {
      nlohmann::json types = nlohmann::json::object();
      for (const auto& [c, st] : r.type_delay) types[std::string(to_string(c))] = {{"mean", st.mean}, {"std", st.stddev}};
      nlohmann::json util = nlohmann::json::object();
      for (const auto& [res, st] : r.util) util[std::string(to_string(res))] = {{"mean", st.mean}, {"std", st.stddev}};
      summary.push_back({{"vehicle_count", r.vehicle_count},
                         {"solver", to_string(r.solver)},
                         {"runs", r.runs},
                         {"feasible_runs", r.feasible_runs},
                         {"aggregate_avg_delay_ms", {{"mean", r.aggregate_delay.mean}, {"std", r.aggregate_delay.stddev}}},
                         {"per_type_avg_delay_ms", types},
                         {"utilization", util},
                         {"runtime_ms", {{"mean", r.runtime.mean}, {"std", r.runtime.stddev}}}});
    }
    json::write_file((dir / "summary.json").string(), summary);
  }
}

// Generate, solve, measure and aggregate for every vehicle count and
// repetition. Rows come out sorted by (vehicle count, repetition, solver).
// Infeasible runs keep their row but stay out of the averages.
inline SweepSummary run_sweep(const RunConfig& config, const RunObserver& observer = {}) {
  config.validate();
  SweepSummary out;

  std::vector<SolverKind> solvers;
  for (const auto k : {SolverKind::Exact, SolverKind::Greedy, SolverKind::Ga}) {
    if (std::find(config.solvers.begin(), config.solvers.end(), k) != config.solvers.end()) {
      solvers.push_back(k);
    }
  }

  std::map<std::tuple<SolverKind, ServiceClass, int>, std::vector<double>> pooled;

  for (const int vehicles : config.effective_vehicle_counts()) {
    ScenarioSpec spec = config.scenario;
    spec.vehicle_count = vehicles;
    if (spec.builtin) {
      const auto listed = standard_vehicle_counts(*spec.builtin);
      spec.nonstandard_vehicle_count =
          std::find(listed.begin(), listed.end(), vehicles) == listed.end();
      if (spec.nonstandard_vehicle_count) {
        out.warnings.push_back(fmt::format("{} vehicles is not a standard {} setting", vehicles,
                                           to_string(*spec.builtin)));
      }
    }
    bool exact_skip_warned = false;

    for (int rep = 0; rep < config.repetitions; ++rep) {
      spec.seed = child_seed(config.master_seed, vehicles, rep);
      const PlacementProblem problem = instantiate(spec);

      for (const auto solver : solvers) {
        SolveResult result;
        switch (solver) {
          case SolverKind::Exact: {
            const bool small_enough = assignment_space_size(problem) <= kBruteForceLimit ||
                                      projected_exact_tree(problem) <=
                                          static_cast<double>(config.exact_node_budget);
            if (!small_enough && !config.force_exact) {
              if (!exact_skip_warned) {
                out.warnings.push_back(fmt::format(
                    "EXACT skipped at {} vehicles: projected search exceeds the node budget "
                    "(use --force-exact)",
                    vehicles));
                exact_skip_warned = true;
              }
              continue;
            }
            ExactOptions opts;
            if (!small_enough) opts.node_budget = config.exact_node_budget;
            result = solve_exact(problem, opts);
            break;
          }
          case SolverKind::Greedy:
            result = solve_greedy(problem, config.greedy_delay_check);
            break;
          case SolverKind::Ga: {
            GaConfig ga = config.ga;
            ga.seed = ga_seed_for(spec.seed);
            result = solve_ga(problem, ga);
            break;
          }
          case SolverKind::BruteForce:
            break;
        }

        RunRow row;
        row.vehicle_count = vehicles;
        row.repetition = rep;
        row.seed = spec.seed;
        row.instances = problem.instances().size();
        row.nodes = problem.nodes().size();
        row.report = make_report(problem, result, solver, spec.seed);
        if (observer) observer(problem, solver, result, row);
        for (auto& [cls, samples] : row.report.per_type_delay_samples_ms) {
          auto& dst = pooled[{solver, cls, vehicles}];
          dst.insert(dst.end(), samples.begin(), samples.end());
        }
        row.report.per_type_delay_samples_ms.clear();
        out.rows.push_back(std::move(row));
      }
    }
  }

  for (const int vehicles : config.effective_vehicle_counts()) {
    for (const auto solver : solvers) {
      SummaryRow sr;
      sr.vehicle_count = vehicles;
      sr.solver = solver;
      std::vector<double> agg, nodes, runtime;
      std::map<ServiceClass, std::vector<double>> types;
      std::map<Resource, std::vector<double>> util;
      for (const auto& r : out.rows) {
        if (r.vehicle_count != vehicles || r.report.solver != solver) continue;
        ++sr.runs;
        if (!r.report.feasible) continue;
        ++sr.feasible_runs;
        agg.push_back(r.report.aggregate_avg_delay_ms);
        nodes.push_back(static_cast<double>(r.report.nodes_explored));
        runtime.push_back(r.report.runtime_ms);
        for (const auto& [c, d] : r.report.per_type_avg_delay_ms) types[c].push_back(d);
        for (const auto& [res, u] : r.report.per_resource_utilization) util[res].push_back(u);
      }
      if (sr.runs == 0) continue;
      sr.aggregate_delay = mean_std(agg);
      sr.nodes_explored = mean_std(nodes);
      sr.runtime = mean_std(runtime);
      for (const auto& [c, xs] : types) sr.type_delay[c] = mean_std(xs);
      for (const auto& [res, xs] : util) sr.util[res] = mean_std(xs);
      out.summary.push_back(std::move(sr));
    }
  }

  for (const auto& [key, samples] : pooled) {
    if (!samples.empty()) out.histograms[key] = histogram_of(samples, config.histogram_bin_width_ms);
  }

  if (!config.output_dir.empty()) write_sweep(out, config);
  return out;
}

inline GaConfig ga_config_from_json(const nlohmann::json& j, GaConfig base = {},
                                    const std::string& path = "/ga") {
  json::detail::get_if(j, "population_size", path, base.population_size);
  json::detail::get_if(j, "generations", path, base.generations);
  json::detail::get_if(j, "tournament_size", path, base.tournament_size);
  json::detail::get_if(j, "crossover_rate", path, base.crossover_rate);
  json::detail::get_if(j, "penalty_weight", path, base.penalty_weight);
  json::detail::get_if(j, "seed", path, base.seed);
  if (j.contains("mutation_rate") && !j["mutation_rate"].is_null()) {
    base.mutation_rate = json::detail::get<double>(j, "mutation_rate", path);
  }
  return base;
}

// RunConfig document:
//   {"scenario": {...ScenarioSpec or {"builtin": "SMALL"}...},
//    "vehicle_counts": [20, 40], "solvers": ["EXACT", "GREEDY", "GA"],
//    "repetitions": 100, "master_seed": 1, "output_dir": "out",
//    "greedy_delay_check": "MAX", "ga": {...}, "force_exact": false,
//    "exact_node_budget": 1000000, "histogram_bin_width_ms": 5,
//    "write_json": false}
inline RunConfig run_config_from_json(const nlohmann::json& j) {
  namespace d = json::detail;
  RunConfig c;
  if (!j.is_object()) throw ParseError("/: expected an object");
  if (j.contains("scenario")) c.scenario = json::scenario_from_json(j["scenario"], "/scenario");
  d::get_if(j, "vehicle_counts", "", c.vehicle_counts);
  if (j.contains("solvers")) {
    c.solvers.clear();
    const auto names = d::get<std::vector<std::string>>(j, "solvers", "");
    for (std::size_t i = 0; i < names.size(); ++i) {
      const auto k = parse_solver_kind(names[i]);
      if (!k) throw ParseError("/solvers/" + std::to_string(i) + ": unknown solver '" + names[i] + "'");
      c.solvers.push_back(*k);
    }
  }
  d::get_if(j, "repetitions", "", c.repetitions);
  d::get_if(j, "master_seed", "", c.master_seed);
  d::get_if(j, "output_dir", "", c.output_dir);
  if (j.contains("greedy_delay_check")) {
    const auto s = d::get<std::string>(j, "greedy_delay_check", "");
    const auto dc = parse_delay_check(s);
    if (!dc) throw ParseError("/greedy_delay_check: expected MAX or MEAN, got '" + s + "'");
    c.greedy_delay_check = *dc;
  }
  if (j.contains("ga")) c.ga = ga_config_from_json(j["ga"]);
  d::get_if(j, "force_exact", "", c.force_exact);
  d::get_if(j, "exact_node_budget", "", c.exact_node_budget);
  d::get_if(j, "histogram_bin_width_ms", "", c.histogram_bin_width_ms);
  d::get_if(j, "write_json", "", c.write_json);
  return c;
}

struct ValidationOutcome {
  FeasibilityReport report;
  // Present when every instance is placed on an existing node.
  std::optional<double> objective_ms;
};

inline ValidationOutcome validate_placement(const PlacementProblem& problem,
                                            const Placement& placement) {
  ValidationOutcome out;
  out.report = check_feasibility(problem, placement);
  if (out.report.count(Constraint::SinglePlacement) == 0 && problem.vehicle_count() > 0) {
    out.objective_ms = evaluate_objective(problem, placement);
  }
  return out;
}

inline ValidationOutcome validate_placement_file(const std::string& problem_path,
                                                 const std::string& placement_path) {
  const auto problem = [&] {
    try {
      return json::problem_from_json(json::read_file(problem_path));
    } catch (const ParseError& e) {
      const std::string what = e.what();
      throw ParseError(what.rfind(problem_path, 0) == 0 ? what : problem_path + ":" + what);
    }
  }();
  Placement placement;
  try {
    placement = json::placement_from_json(json::read_file(placement_path), problem.instances().size());
  } catch (const ParseError& e) {
    const std::string what = e.what();
    throw ParseError(what.rfind(placement_path, 0) == 0 ? what : placement_path + ":" + what);
  }
  return validate_placement(problem, placement);
}

}  // namespace vsp
