#pragma once

#include <cstdint>
#include <initializer_list>

namespace vsp {

// Deterministic random streams.
//
// Every random quantity in the library is a pure function of a 64-bit key
// built by folding integer coordinates into a seed with the SplitMix64
// finalizer:
//
//   key = seed
//   for each coordinate x:  key = mix64(key + golden * (x + 1))
//
// where golden = 0x9E3779B97F4A7C15 and mix64 is the SplitMix64 output
// function (Steele, Lea & Flood 2014). A uniform double in [0, 1) takes the
// top 53 bits of the key. Entry (v, c) of a delay matrix therefore depends
// on (seed, v, c) alone and can be generated in any order.

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t derive_key(std::uint64_t seed, std::initializer_list<std::uint64_t> coords) {
  std::uint64_t key = seed;
  for (const auto x : coords) key = mix64(key + kGolden * (x + 1));
  return key;
}

constexpr double to_unit_interval(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// U[low, high) keyed by (seed, coords...).
constexpr double keyed_uniform(std::uint64_t seed, std::initializer_list<std::uint64_t> coords,
                               double low, double high) {
  return low + to_unit_interval(derive_key(seed, coords)) * (high - low);
}

// Sequential SplitMix64 stream. Satisfies UniformRandomBitGenerator.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  constexpr result_type operator()() {
    state_ += kGolden;
    return mix64(state_);
  }

  constexpr double uniform01() { return to_unit_interval((*this)()); }

  // Uniform integer in [0, n) by multiply-shift; n must be > 0.
  constexpr std::uint64_t below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

}  // namespace vsp
