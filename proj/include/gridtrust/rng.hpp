#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace gridtrust {

// Seeded generator used for every random draw in a simulation. The engine is
// std::mt19937_64; the mappings to doubles are done on the raw bits instead of
// through std::uniform_real_distribution so that a given seed produces the
// same stream on every standard library implementation.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Inversion sampling keeps the draw count at exactly one per call.
  double exponential(double rate) { return -std::log1p(-uniform01()) / rate; }

  // Uniform index in [0, n).
  std::size_t pick_index(std::size_t n) {
    std::size_t i = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
    return i >= n ? n - 1 : i;
  }

  bool bernoulli(double p) { return uniform01() < p; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace gridtrust
