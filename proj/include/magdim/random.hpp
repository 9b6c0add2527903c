#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace magdim {

/// splitmix64 output finaliser.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Folds any number of integers into one stream key.
constexpr std::uint64_t derive_key(std::uint64_t seed) { return mix64(seed); }
template <typename... Rest>
constexpr std::uint64_t derive_key(std::uint64_t seed, std::uint64_t next, Rest... rest) {
  return derive_key(mix64(seed) ^ (next + 0x632BE59BD9B4E019ull), static_cast<std::uint64_t>(rest)...);
}

/// Counter-based generator, "magdim-ctr64 v1": draw i of stream `key` is
/// mix64(key ^ mix64(i)). Any draw can be computed without the ones before
/// it, so streams keyed per (seed, coordinate, ...) give identical output
/// however the work is scheduled. Changing this function changes every
/// seeded output; bump the version tag if you do.
class CounterStream {
 public:
  static constexpr const char* kName = "magdim-ctr64 v1";

  explicit CounterStream(std::uint64_t key, std::uint64_t counter = 0) : key_(key), counter_(counter) {}

  static constexpr std::uint64_t at(std::uint64_t key, std::uint64_t index) { return mix64(key ^ mix64(index)); }

  std::uint64_t next_u64() { return at(key_, counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform on (0, 1).
  double uniform_open() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by 128-bit multiply-shift.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

  /// Standard normal via Box-Muller; consumes two draws, keeps the cosine.
  double normal() {
    const double u1 = uniform_open();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard exponential.
  double exponential() { return -std::log(uniform_open()); }

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace magdim
