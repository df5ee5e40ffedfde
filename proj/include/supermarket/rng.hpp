#pragma once

#include <cstdint>
#include <random>

namespace supermarket {

/// Seed plus logical stream index. Replications draw from disjoint streams
/// (stream = task index) so results do not depend on worker count or
/// scheduling order.
struct RngSpec {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
};

/// mt19937_64 seeded through a splitmix64 mix of (seed, stream). Variates
/// are produced by explicit algorithms below, not std distributions, so
/// sequences are bit-identical across standard libraries.
class Rng {
 public:
  explicit Rng(RngSpec spec);

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// Exponential with the given rate via inversion; rate > 0.
  double exponential(double rate);

  /// Uniform integer in [0, bound), bound >= 1, unbiased
  /// (multiply-shift with rejection).
  std::uint64_t uniform_below(std::uint64_t bound);

 private:
  std::mt19937_64 gen_;
};

}  // namespace supermarket
