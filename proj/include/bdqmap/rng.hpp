#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bdqmap {

using Rng = std::mt19937_64;

// splitmix64 step, used to derive independent stream seeds from one base seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic seed for a named sub-stream: each path element folds into the
// chain, so (base, {a, b}) and (base, {a, c}) give unrelated seeds.
inline std::uint64_t derive_seed(std::uint64_t base,
                                 std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = base ^ 0x6a09e667f3bcc909ULL;
  for (std::uint64_t p : path) {
    s ^= splitmix64(s) + p;
    (void)splitmix64(s);
  }
  return splitmix64(s);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(seed); }

inline double uniform_unit(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline double uniform_in(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double standard_normal(Rng& rng) {
  return std::normal_distribution<double>(0.0, 1.0)(rng);
}

}  // namespace bdqmap
