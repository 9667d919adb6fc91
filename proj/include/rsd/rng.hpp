#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace rsd {

/// Seeded pseudo-random stream. Every randomized routine takes one of these
/// explicitly; there is no global generator.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  /// Independent stream for trial `index` of an experiment seeded with `master`.
  static Rng derive(std::uint64_t master, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      0x5eedu};
    Rng rng;
    rng.engine_.seed(seq);
    return rng;
  }

  /// Uniform draw from [0, 1).
  double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  double normal() { return normal_(engine_); }

  /// Uniform draw from {0, ..., n − 1}; n must be positive.
  std::size_t uniform_index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace rsd
