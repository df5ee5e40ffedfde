#include "supermarket/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace supermarket {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(RngSpec spec) : gen_(0) {
  std::uint64_t s = spec.seed;
  std::uint64_t a = splitmix64(s);
  s ^= spec.stream * 0xda942042e4dd58b5ULL + 0x2545f4914f6cdd1dULL;
  std::uint64_t b = splitmix64(s);
  std::uint64_t c = splitmix64(s);
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
  gen_.seed(seq);
}

double Rng::exponential(double rate) {
  if (!(rate > 0.0)) throw std::invalid_argument("exponential needs rate > 0");
  // -log(1 - U) keeps U = 0 safe; U = 1 is unreachable with 53 bits
  return -std::log1p(-uniform01()) / rate;
}

std::uint64_t Rng::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw std::invalid_argument("uniform_below needs bound >= 1");
  // Lemire's multiply-shift; rejection keeps it exactly uniform.
  while (true) {
    std::uint64_t x = gen_();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto lo = static_cast<std::uint64_t>(m);
    if (lo >= bound) return static_cast<std::uint64_t>(m >> 64);
    // slow path: only when lo < bound
    std::uint64_t threshold = -bound % bound;
    if (lo >= threshold) return static_cast<std::uint64_t>(m >> 64);
  }
}

}  // namespace supermarket
