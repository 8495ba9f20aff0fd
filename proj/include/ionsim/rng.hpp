#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ionsim {

// splitmix64 step, used to derive independent per-trajectory seeds so that
// results do not depend on how trajectories are distributed over workers.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t state = master + 0x632be59bd9b4e019ULL * (index + 1);
  std::uint64_t s = splitmix64(state);
  return splitmix64(state) ^ s;
}

// Uniform in [0, 1). Hand-rolled from raw 64-bit draws so that streams are
// bitwise identical across standard library implementations.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller, same portability rationale.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = 0.0;
  do {
    u1 = uniform_unit(rng);
  } while (u1 <= 0.0);
  const double u2 = uniform_unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace ionsim
