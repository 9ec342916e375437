#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vsp/errors.hpp"
#include "vsp/numeric.hpp"
#include "vsp/resource_vector.hpp"

namespace vsp {

// Position-based identifier. Entity i of a problem always carries id i.
template <class Tag>
struct Index {
  std::size_t value = 0;

  constexpr Index() = default;
  constexpr explicit Index(std::size_t v) : value(v) {}

  friend constexpr auto operator<=>(const Index&, const Index&) = default;
};

struct TypeTag {};
struct InstanceTag {};
struct NodeTag {};

using TypeId = Index<TypeTag>;
using InstanceId = Index<InstanceTag>;
using NodeId = Index<NodeTag>;

enum class ServiceClass { Cam, Denm, Media };
enum class Tier { Core, Enb, Rsu };

constexpr std::string_view to_string(ServiceClass s) {
  switch (s) {
    case ServiceClass::Cam: return "CAM";
    case ServiceClass::Denm: return "DENM";
    case ServiceClass::Media: return "MEDIA";
  }
  return "?";
}

constexpr std::string_view to_string(Tier t) {
  switch (t) {
    case Tier::Core: return "CORE";
    case Tier::Enb: return "ENB";
    case Tier::Rsu: return "RSU";
  }
  return "?";
}

inline std::optional<ServiceClass> parse_service_class(std::string_view s) {
  if (s == "CAM") return ServiceClass::Cam;
  if (s == "DENM") return ServiceClass::Denm;
  if (s == "MEDIA") return ServiceClass::Media;
  return std::nullopt;
}

inline std::optional<Tier> parse_tier(std::string_view s) {
  if (s == "CORE") return Tier::Core;
  if (s == "ENB") return Tier::Enb;
  if (s == "RSU") return Tier::Rsu;
  return std::nullopt;
}

struct UniqueServiceType {
  TypeId id;
  ServiceClass name = ServiceClass::Cam;
  double delay_threshold_ms = 0.0;
  ResourceVector demand;
  int redundancy_requirement = 1;
};

struct ServiceInstance {
  InstanceId id;
  TypeId type_ref;
};

struct ComputeNode {
  NodeId id;
  Tier tier = Tier::Core;
  ResourceVector capacity;
};

// Access delay in ms seen by vehicle v when served from node c. Row-major,
// |V| rows by |C| columns.
class DelayMatrix {
 public:
  DelayMatrix() = default;

  DelayMatrix(std::size_t vehicles, std::size_t nodes, std::vector<double> delays_ms)
      : vehicles_(vehicles), nodes_(nodes), delays_(std::move(delays_ms)) {
    if (delays_.size() != vehicles_ * nodes_) {
      throw InvalidProblem("delay matrix has " + std::to_string(delays_.size()) +
                           " entries, expected " + std::to_string(vehicles_) + " x " +
                           std::to_string(nodes_));
    }
    for (std::size_t i = 0; i < delays_.size(); ++i) {
      if (!(std::isfinite(delays_[i]) && delays_[i] > 0.0)) {
        throw InvalidProblem("delay matrix entry (" + std::to_string(i / nodes_) + ", " +
                             std::to_string(i % nodes_) + ") must be positive and finite");
      }
    }
  }

  std::size_t vehicles() const { return vehicles_; }
  std::size_t nodes() const { return nodes_; }

  double at(std::size_t vehicle, NodeId node) const {
    return delays_[vehicle * nodes_ + node.value];
  }

  std::span<const double> row(std::size_t vehicle) const {
    return {delays_.data() + vehicle * nodes_, nodes_};
  }

  std::span<const double> data() const { return delays_; }

 private:
  std::size_t vehicles_ = 0;
  std::size_t nodes_ = 0;
  std::vector<double> delays_;
};

// A validated placement instance. Immutable once built.
//
// Every type lists exactly redundancy_requirement instances, so the
// redundancy floor becomes a construction-time property and any total
// assignment meets it.
class PlacementProblem {
 public:
  PlacementProblem(std::vector<UniqueServiceType> types,
                   std::vector<ServiceInstance> instances,
                   std::vector<ComputeNode> nodes, std::size_t vehicle_count,
                   DelayMatrix delay_matrix)
      : types_(std::move(types)),
        instances_(std::move(instances)),
        nodes_(std::move(nodes)),
        vehicle_count_(vehicle_count),
        delays_(std::move(delay_matrix)) {
    validate();
    precompute_node_stats();
  }

  std::span<const UniqueServiceType> types() const { return types_; }
  std::span<const ServiceInstance> instances() const { return instances_; }
  std::span<const ComputeNode> nodes() const { return nodes_; }
  std::size_t vehicle_count() const { return vehicle_count_; }
  const DelayMatrix& delay_matrix() const { return delays_; }

  const UniqueServiceType& type(TypeId id) const { return types_[id.value]; }
  const UniqueServiceType& type_of(InstanceId s) const {
    return types_[instances_[s.value].type_ref.value];
  }
  const ComputeNode& node(NodeId id) const { return nodes_[id.value]; }

  // Instances of type u in input order.
  std::span<const InstanceId> instances_of(TypeId u) const { return by_type_[u.value]; }

  // (1/|V|) sum_v d[v][c], exactly summed so vehicle order is irrelevant;
  // zero when there are no vehicles.
  double mean_delay(NodeId c) const { return node_mean_[c.value]; }
  // max_v d[v][c]; zero when there are no vehicles.
  double max_delay(NodeId c) const { return node_max_[c.value]; }

 private:
  void validate() {
    for (std::size_t i = 0; i < types_.size(); ++i) {
      const auto& t = types_[i];
      if (t.id.value != i) throw InvalidProblem("type id must equal its position: " + std::to_string(i));
      if (!(t.delay_threshold_ms > 0.0) || !std::isfinite(t.delay_threshold_ms)) {
        throw InvalidProblem("type " + std::to_string(i) + ": delay threshold must be > 0");
      }
      if (!t.demand.all_positive() || !t.demand.all_finite()) {
        throw InvalidProblem("type " + std::to_string(i) + ": demand components must be > 0");
      }
      if (t.redundancy_requirement < 1) {
        throw InvalidProblem("type " + std::to_string(i) + ": redundancy requirement must be >= 1");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (types_[j].name == t.name) {
          throw InvalidProblem("service class " + std::string(to_string(t.name)) + " listed twice");
        }
      }
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const auto& n = nodes_[i];
      if (n.id.value != i) throw InvalidProblem("node id must equal its position: " + std::to_string(i));
      if (!n.capacity.all_positive() || !n.capacity.all_finite()) {
        throw InvalidProblem("node " + std::to_string(i) + ": capacity components must be > 0");
      }
    }
    by_type_.assign(types_.size(), {});
    for (std::size_t i = 0; i < instances_.size(); ++i) {
      const auto& s = instances_[i];
      if (s.id.value != i) throw InvalidProblem("instance id must equal its position: " + std::to_string(i));
      if (s.type_ref.value >= types_.size()) {
        throw InvalidProblem("instance " + std::to_string(i) + " references unknown type " +
                             std::to_string(s.type_ref.value));
      }
      by_type_[s.type_ref.value].push_back(s.id);
    }
    for (std::size_t u = 0; u < types_.size(); ++u) {
      const auto count = by_type_[u].size();
      if (count != static_cast<std::size_t>(types_[u].redundancy_requirement)) {
        throw InvalidProblem("type " + std::to_string(u) + " lists " + std::to_string(count) +
                             " instances but requires " +
                             std::to_string(types_[u].redundancy_requirement));
      }
      if (count > nodes_.size()) {
        throw InvalidProblem("type " + std::to_string(u) + " needs " + std::to_string(count) +
                             " instances on distinct nodes but only " +
                             std::to_string(nodes_.size()) + " nodes exist");
      }
    }
    if (delays_.vehicles() != vehicle_count_ || delays_.nodes() != nodes_.size()) {
      throw InvalidProblem("delay matrix is " + std::to_string(delays_.vehicles()) + " x " +
                           std::to_string(delays_.nodes()) + ", expected " +
                           std::to_string(vehicle_count_) + " x " + std::to_string(nodes_.size()));
    }
  }

  void precompute_node_stats() {
    node_mean_.assign(nodes_.size(), 0.0);
    node_max_.assign(nodes_.size(), 0.0);
    if (vehicle_count_ == 0) return;
    for (std::size_t c = 0; c < nodes_.size(); ++c) {
      ExactSum sum;
      double mx = 0.0;
      for (std::size_t v = 0; v < vehicle_count_; ++v) {
        const double d = delays_.at(v, NodeId{c});
        sum.add(d);
        mx = std::max(mx, d);
      }
      node_mean_[c] = sum.value() / static_cast<double>(vehicle_count_);
      node_max_[c] = mx;
    }
  }

  std::vector<UniqueServiceType> types_;
  std::vector<ServiceInstance> instances_;
  std::vector<ComputeNode> nodes_;
  std::size_t vehicle_count_ = 0;
  DelayMatrix delays_;
  std::vector<std::vector<InstanceId>> by_type_;
  std::vector<double> node_mean_;
  std::vector<double> node_max_;
};

// Node chosen for each instance, indexed by instance position. A missing
// entry means the instance is unplaced.
using Assignment = std::vector<std::optional<NodeId>>;

struct Placement {
  Assignment assignment;
  // NaN unless the assignment is total.
  double objective_ms = std::numeric_limits<double>::quiet_NaN();

  bool is_total() const {
    return std::all_of(assignment.begin(), assignment.end(),
                       [](const auto& a) { return a.has_value(); });
  }

  std::optional<NodeId> node_of(InstanceId s) const {
    return s.value < assignment.size() ? assignment[s.value] : std::nullopt;
  }
};

}  // namespace vsp
