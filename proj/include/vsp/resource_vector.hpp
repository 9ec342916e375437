#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string_view>

namespace vsp {

enum class Resource : std::size_t { Cpu = 0, Memory = 1, Storage = 2 };

inline constexpr std::array<Resource, 3> kAllResources = {
    Resource::Cpu, Resource::Memory, Resource::Storage};

constexpr std::string_view to_string(Resource r) {
  switch (r) {
    case Resource::Cpu: return "cpu";
    case Resource::Memory: return "memory";
    case Resource::Storage: return "storage";
  }
  return "?";
}

// (cpu cores, memory GB, storage GB). Used for both service demands and node
// capacities.
struct ResourceVector {
  double cpu = 0.0;
  double memory = 0.0;
  double storage = 0.0;

  constexpr double operator[](Resource r) const {
    switch (r) {
      case Resource::Cpu: return cpu;
      case Resource::Memory: return memory;
      case Resource::Storage: return storage;
    }
    return 0.0;
  }

  constexpr double& operator[](Resource r) {
    switch (r) {
      case Resource::Memory: return memory;
      case Resource::Storage: return storage;
      default: return cpu;
    }
  }

  constexpr ResourceVector& operator+=(const ResourceVector& o) {
    cpu += o.cpu;
    memory += o.memory;
    storage += o.storage;
    return *this;
  }

  constexpr ResourceVector& operator-=(const ResourceVector& o) {
    cpu -= o.cpu;
    memory -= o.memory;
    storage -= o.storage;
    return *this;
  }

  friend constexpr ResourceVector operator+(ResourceVector a, const ResourceVector& b) {
    return a += b;
  }
  friend constexpr ResourceVector operator-(ResourceVector a, const ResourceVector& b) {
    return a -= b;
  }
  friend constexpr bool operator==(const ResourceVector&, const ResourceVector&) = default;

  // Component-wise a <= b in every dimension.
  constexpr bool fits_in(const ResourceVector& b) const {
    return cpu <= b.cpu && memory <= b.memory && storage <= b.storage;
  }

  constexpr bool all_nonnegative() const {
    return cpu >= 0.0 && memory >= 0.0 && storage >= 0.0;
  }

  constexpr bool all_positive() const {
    return cpu > 0.0 && memory > 0.0 && storage > 0.0;
  }

  bool all_finite() const {
    return std::isfinite(cpu) && std::isfinite(memory) && std::isfinite(storage);
  }
};

}  // namespace vsp
