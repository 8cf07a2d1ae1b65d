#pragma once

#include <cstdint>
#include <limits>

namespace kecss {

// splitmix64 finalizer; the basis for every derived seed in the project so
// that per-node and per-edge draws are reproducible independent of the
// order in which they are made.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a) {
  return mix64(seed ^ mix64(a + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return derive_seed(derive_seed(seed, a), b);
}

// Counter-based generator satisfying UniformRandomBitGenerator.
class SplitMix {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % bound;
  }

  unsigned __int128 below128(unsigned __int128 bound) {
    if (bound <= max()) return below(static_cast<std::uint64_t>(bound));
    const unsigned __int128 all = ~static_cast<unsigned __int128>(0);
    const unsigned __int128 limit = all - all % bound;
    unsigned __int128 x;
    do {
      x = (static_cast<unsigned __int128>((*this)()) << 64) | (*this)();
    } while (x >= limit);
    return x % bound;
  }

  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// True with probability 2^-exponent, decided by a single hashed draw.
constexpr bool coin_power_of_two(std::uint64_t draw, int exponent) {
  if (exponent <= 0) return true;
  if (exponent >= 64) return draw == 0;
  return (draw >> (64 - exponent)) == 0;
}

}  // namespace kecss
