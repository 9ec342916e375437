#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "vsp/errors.hpp"
#include "vsp/metrics.hpp"
#include "vsp/model.hpp"
#include "vsp/objective.hpp"
#include "vsp/scenario.hpp"
#include "vsp/solve_result.hpp"

// JSON interchange. Field names follow the C++ member names. A problem
// document looks like:
//
//   {
//     "types": [{"id": 0, "name": "CAM", "delay_threshold_ms": 20,
//                "demand": {"cpu": 2, "memory": 3.5, "storage": 4},
//                "redundancy_requirement": 1}, ...],
//     "instances": [{"id": 0, "type_ref": 0}, ...],
//     "nodes": [{"id": 0, "tier": "CORE",
//                "capacity": {"cpu": 32, "memory": 64, "storage": 240}}, ...],
//     "vehicle_count": 20,
//     "delay_matrix": {"delays_ms": [[...one row per vehicle...], ...]}
//   }
//
// and a placement document:
//
//   {"assignment": [{"instance": 0, "node": 7}, ...], "objective_ms": 41.2,
//    "stats": {...}}
//
// Parse failures raise ParseError naming the JSON pointer of the bad field.

namespace vsp::json {

using nlohmann::json;

namespace detail {

inline std::string join(const std::string& path, std::string_view key) {
  return path + "/" + std::string(key);
}

inline const json& field(const json& obj, std::string_view key, const std::string& path) {
  if (!obj.is_object()) throw ParseError(path + ": expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) throw ParseError(join(path, key) + ": missing field");
  return *it;
}

template <class T>
T as(const json& j, const std::string& path) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

template <class T>
T get(const json& obj, std::string_view key, const std::string& path) {
  return as<T>(field(obj, key, path), join(path, key));
}

template <class T>
void get_if(const json& obj, std::string_view key, const std::string& path, T& out) {
  if (obj.is_object() && obj.contains(key)) out = get<T>(obj, key, path);
}

inline const json& array_field(const json& obj, std::string_view key, const std::string& path) {
  const json& a = field(obj, key, path);
  if (!a.is_array()) throw ParseError(join(path, key) + ": expected an array");
  return a;
}

}  // namespace detail

inline json to_json(const ResourceVector& r) {
  return {{"cpu", r.cpu}, {"memory", r.memory}, {"storage", r.storage}};
}

inline ResourceVector resource_from_json(const json& j, const std::string& path) {
  return {detail::get<double>(j, "cpu", path), detail::get<double>(j, "memory", path),
          detail::get<double>(j, "storage", path)};
}

inline json to_json(const UniqueServiceType& t) {
  return {{"id", t.id.value},
          {"name", to_string(t.name)},
          {"delay_threshold_ms", t.delay_threshold_ms},
          {"demand", to_json(t.demand)},
          {"redundancy_requirement", t.redundancy_requirement}};
}

inline ServiceClass service_class_from_json(const json& j, const std::string& path) {
  const auto name = detail::as<std::string>(j, path);
  const auto cls = parse_service_class(name);
  if (!cls) throw ParseError(path + ": unknown service class '" + name + "'");
  return *cls;
}

inline UniqueServiceType service_type_from_json(const json& j, const std::string& path) {
  UniqueServiceType t;
  t.id = TypeId{detail::get<std::size_t>(j, "id", path)};
  t.name = service_class_from_json(detail::field(j, "name", path), path + "/name");
  t.delay_threshold_ms = detail::get<double>(j, "delay_threshold_ms", path);
  t.demand = resource_from_json(detail::field(j, "demand", path), path + "/demand");
  t.redundancy_requirement = 1;
  detail::get_if(j, "redundancy_requirement", path, t.redundancy_requirement);
  return t;
}

inline json to_json(const PlacementProblem& p) {
  json types = json::array();
  for (const auto& t : p.types()) types.push_back(to_json(t));
  json instances = json::array();
  for (const auto& s : p.instances()) {
    instances.push_back({{"id", s.id.value}, {"type_ref", s.type_ref.value}});
  }
  json nodes = json::array();
  for (const auto& n : p.nodes()) {
    nodes.push_back({{"id", n.id.value}, {"tier", to_string(n.tier)}, {"capacity", to_json(n.capacity)}});
  }
  json rows = json::array();
  for (std::size_t v = 0; v < p.vehicle_count(); ++v) {
    const auto row = p.delay_matrix().row(v);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return {{"types", types},
          {"instances", instances},
          {"nodes", nodes},
          {"vehicle_count", p.vehicle_count()},
          {"delay_matrix", {{"delays_ms", rows}}}};
}

inline PlacementProblem problem_from_json(const json& j, const std::string& path = "") {
  std::vector<UniqueServiceType> types;
  const json& jt = detail::array_field(j, "types", path);
  for (std::size_t i = 0; i < jt.size(); ++i) {
    types.push_back(service_type_from_json(jt[i], path + "/types/" + std::to_string(i)));
  }

  std::vector<ServiceInstance> instances;
  const json& js = detail::array_field(j, "instances", path);
  for (std::size_t i = 0; i < js.size(); ++i) {
    const auto p = path + "/instances/" + std::to_string(i);
    instances.push_back({InstanceId{detail::get<std::size_t>(js[i], "id", p)},
                         TypeId{detail::get<std::size_t>(js[i], "type_ref", p)}});
  }

  std::vector<ComputeNode> nodes;
  const json& jn = detail::array_field(j, "nodes", path);
  for (std::size_t i = 0; i < jn.size(); ++i) {
    const auto p = path + "/nodes/" + std::to_string(i);
    const auto tier_name = detail::get<std::string>(jn[i], "tier", p);
    const auto tier = parse_tier(tier_name);
    if (!tier) throw ParseError(p + "/tier: unknown tier '" + tier_name + "'");
    nodes.push_back({NodeId{detail::get<std::size_t>(jn[i], "id", p)}, *tier,
                     resource_from_json(detail::field(jn[i], "capacity", p), p + "/capacity")});
  }

  const auto vehicles = detail::get<std::size_t>(j, "vehicle_count", path);
  const auto mpath = path + "/delay_matrix";
  const json& rows = detail::array_field(detail::field(j, "delay_matrix", path), "delays_ms", mpath);
  if (rows.size() != vehicles) {
    throw ParseError(mpath + "/delays_ms: " + std::to_string(rows.size()) + " rows, expected " +
                     std::to_string(vehicles));
  }
  std::vector<double> flat;
  flat.reserve(vehicles * nodes.size());
  for (std::size_t v = 0; v < rows.size(); ++v) {
    const auto rpath = mpath + "/delays_ms/" + std::to_string(v);
    const auto row = detail::as<std::vector<double>>(rows[v], rpath);
    if (row.size() != nodes.size()) {
      throw ParseError(rpath + ": " + std::to_string(row.size()) + " columns, expected " +
                       std::to_string(nodes.size()));
    }
    flat.insert(flat.end(), row.begin(), row.end());
  }
  try {
    return PlacementProblem(std::move(types), std::move(instances), std::move(nodes), vehicles,
                            DelayMatrix(vehicles, jn.size(), std::move(flat)));
  } catch (const InvalidProblem& e) {
    throw ParseError((path.empty() ? std::string("/") : path) + ": invalid problem: " + e.what());
  }
}

inline json to_json(const SolveStats& s) {
  return {{"nodes_explored", s.nodes_explored},
          {"runtime_ms", s.runtime_ms},
          {"proven_optimal", s.proven_optimal}};
}

inline json to_json(const Placement& p) {
  json a = json::array();
  for (std::size_t s = 0; s < p.assignment.size(); ++s) {
    if (p.assignment[s]) a.push_back({{"instance", s}, {"node", p.assignment[s]->value}});
  }
  json out = {{"assignment", a}};
  out["objective_ms"] = std::isnan(p.objective_ms) ? json(nullptr) : json(p.objective_ms);
  return out;
}

inline json to_json(const SolveResult& r, SolverKind solver) {
  json out = r.placement ? to_json(*r.placement) : json::object();
  out["solver"] = to_string(solver);
  out["feasible"] = r.feasible();
  out["stats"] = to_json(r.stats);
  if (!r.feasible()) out["infeasible_reason"] = r.infeasible_reason;
  if (r.stuck_instance) out["stuck_instance"] = r.stuck_instance->value;
  return out;
}

// Instances absent from the document stay unplaced; duplicates and unknown
// instance ids are parse errors. Node ids are not range-checked here so the
// feasibility checker can report them.
inline Placement placement_from_json(const json& j, std::size_t instance_count,
                                     const std::string& path = "") {
  Placement p;
  p.assignment.assign(instance_count, std::nullopt);
  const json& a = detail::array_field(j, "assignment", path);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto epath = path + "/assignment/" + std::to_string(i);
    const auto s = detail::get<std::size_t>(a[i], "instance", epath);
    const auto c = detail::get<std::size_t>(a[i], "node", epath);
    if (s >= instance_count) {
      throw ParseError(epath + "/instance: unknown instance " + std::to_string(s));
    }
    if (p.assignment[s]) {
      throw ParseError(epath + "/instance: instance " + std::to_string(s) + " assigned twice");
    }
    p.assignment[s] = NodeId{c};
  }
  if (j.contains("objective_ms") && j["objective_ms"].is_number()) {
    p.objective_ms = j["objective_ms"].get<double>();
  }
  return p;
}

inline json to_json(const FeasibilityReport& r) {
  json v = json::array();
  for (const auto& x : r.violations) {
    json e = {{"constraint", to_string(x.constraint)}};
    if (x.instance) e["instance"] = x.instance->value;
    if (x.node) e["node"] = x.node->value;
    if (x.type) e["type"] = x.type->value;
    if (x.resource) e["resource"] = to_string(*x.resource);
    if (x.constraint != Constraint::SinglePlacement) {
      e["observed"] = x.observed;
      e["limit"] = x.limit;
    }
    v.push_back(std::move(e));
  }
  return {{"feasible", r.feasible()}, {"violations", v}};
}

inline json to_json(const DelayRange& r) { return json::array({r.low_ms, r.high_ms}); }

inline DelayRange delay_range_from_json(const json& j, const std::string& path) {
  const auto v = detail::as<std::vector<double>>(j, path);
  if (v.size() != 2) throw ParseError(path + ": expected [low, high]");
  return {v[0], v[1]};
}

inline json to_json(const ScenarioSpec& s) {
  json catalog = json::array();
  for (const auto& t : s.service_catalog) {
    catalog.push_back({{"name", to_string(t.name)},
                       {"delay_threshold_ms", t.delay_threshold_ms},
                       {"demand", to_json(t.demand)}});
  }
  json out = {{"lane_count", s.lane_count},
              {"lane_length_km", s.lane_length_km},
              {"vehicle_count", s.vehicle_count},
              {"core_nodes", s.core_nodes},
              {"enb_nodes", s.enb_nodes},
              {"rsu_nodes", s.rsu_nodes},
              {"core_capacity", to_json(s.core_capacity)},
              {"enb_capacity", to_json(s.enb_capacity)},
              {"rsu_capacity", to_json(s.rsu_capacity)},
              {"service_catalog", catalog},
              {"delay_ranges_ms",
               {{"CORE", to_json(s.core_delay)}, {"ENB", to_json(s.enb_delay)}, {"RSU", to_json(s.rsu_delay)}}},
              {"vehicles_per_instance", s.vehicles_per_instance},
              {"seed", s.seed}};
  if (s.builtin) out["builtin"] = to_string(*s.builtin);
  return out;
}

// A spec document either spells out every field, or names a built-in
// ("builtin": "SMALL") and overrides some of its fields.
inline ScenarioSpec scenario_from_json(const json& j, const std::string& path = "") {
  if (!j.is_object()) throw ParseError((path.empty() ? "/" : path) + ": expected an object");
  ScenarioSpec s;
  if (j.contains("builtin")) {
    const auto name = detail::get<std::string>(j, "builtin", path);
    const auto which = parse_builtin_scenario(name);
    if (!which) throw ParseError(path + "/builtin: unknown scenario '" + name + "'");
    int vehicles = standard_vehicle_counts(*which).front();
    std::uint64_t seed = 0;
    detail::get_if(j, "vehicle_count", path, vehicles);
    detail::get_if(j, "seed", path, seed);
    s = builtin_scenario(*which, vehicles, seed);
  } else {
    s.service_catalog = default_service_catalog();
  }
  detail::get_if(j, "lane_count", path, s.lane_count);
  detail::get_if(j, "lane_length_km", path, s.lane_length_km);
  detail::get_if(j, "vehicle_count", path, s.vehicle_count);
  detail::get_if(j, "core_nodes", path, s.core_nodes);
  detail::get_if(j, "enb_nodes", path, s.enb_nodes);
  detail::get_if(j, "rsu_nodes", path, s.rsu_nodes);
  detail::get_if(j, "vehicles_per_instance", path, s.vehicles_per_instance);
  detail::get_if(j, "seed", path, s.seed);
  if (j.contains("core_capacity")) s.core_capacity = resource_from_json(j["core_capacity"], path + "/core_capacity");
  if (j.contains("enb_capacity")) s.enb_capacity = resource_from_json(j["enb_capacity"], path + "/enb_capacity");
  if (j.contains("rsu_capacity")) s.rsu_capacity = resource_from_json(j["rsu_capacity"], path + "/rsu_capacity");
  if (j.contains("delay_ranges_ms")) {
    const json& r = j["delay_ranges_ms"];
    const auto rp = path + "/delay_ranges_ms";
    if (r.contains("CORE")) s.core_delay = delay_range_from_json(r["CORE"], rp + "/CORE");
    if (r.contains("ENB")) s.enb_delay = delay_range_from_json(r["ENB"], rp + "/ENB");
    if (r.contains("RSU")) s.rsu_delay = delay_range_from_json(r["RSU"], rp + "/RSU");
  }
  if (j.contains("service_catalog")) {
    s.service_catalog.clear();
    const json& c = detail::array_field(j, "service_catalog", path);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const auto p = path + "/service_catalog/" + std::to_string(i);
      UniqueServiceType t;
      t.id = TypeId{i};
      t.name = service_class_from_json(detail::field(c[i], "name", p), p + "/name");
      t.delay_threshold_ms = detail::get<double>(c[i], "delay_threshold_ms", p);
      t.demand = resource_from_json(detail::field(c[i], "demand", p), p + "/demand");
      s.service_catalog.push_back(t);
    }
  }
  try {
    s.validate();
  } catch (const InvalidSpec& e) {
    throw ParseError((path.empty() ? std::string("/") : path) + ": " + e.what());
  }
  return s;
}

inline json to_json(const std::vector<VehiclePosition>& positions) {
  json out = json::array();
  for (const auto& p : positions) out.push_back({{"lane", p.lane}, {"km", p.km}});
  return out;
}

inline json to_json(const Histogram& h) {
  json bins = json::array();
  for (const auto& b : h.bins) {
    bins.push_back({{"bin_left", b.left_ms}, {"bin_right", b.right_ms}, {"density", b.density()}});
  }
  return {{"bin_width_ms", h.bin_width_ms}, {"bins", bins}};
}

inline json to_json(const ExperimentReport& r) {
  json per_type = json::object();
  for (const auto& [cls, d] : r.per_type_avg_delay_ms) per_type[std::string(to_string(cls))] = d;
  json util = json::object();
  for (const auto& [res, u] : r.per_resource_utilization) util[std::string(to_string(res))] = u;
  return {{"solver", to_string(r.solver)},
          {"seed", r.seed},
          {"feasible", r.feasible},
          {"aggregate_avg_delay_ms", r.aggregate_avg_delay_ms},
          {"per_type_avg_delay_ms", per_type},
          {"per_resource_utilization", util},
          {"runtime_ms", r.runtime_ms},
          {"nodes_explored", r.nodes_explored}};
}

inline json parse_text(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source + ": " + e.what());
  }
}

inline json read_file(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParseError(file + ": cannot open");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), file);
}

inline void write_file(const std::string& file, const json& j) {
  std::ofstream out(file);
  if (!out) throw Error(file + ": cannot open for writing");
  out << j.dump(2) << '\n';
  if (!out) throw Error(file + ": write failed");
}

}  // namespace vsp::json
