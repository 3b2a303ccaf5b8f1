#pragma once

#include <cstdint>
#include <random>

namespace negosim {

// splitmix64; used to derive independent stream seeds from (seed, index)
// so parallel workers reproduce the serial schedule exactly.
inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t index) {
  return mix64(seed ^ mix64(index + 1));
}

// Distribution helpers are hand-rolled on top of mt19937_64 (the engine is
// fully specified by the standard; the std:: distributions are not), so
// sequences are reproducible across compilers.
inline double uniform01(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;
}

inline double uniform_range(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Box-Muller without state; burns two draws per call.
double normal(std::mt19937_64& rng, double mean, double stddev);

// Unbiased integer draw in [0, n).
uint64_t uniform_index(std::mt19937_64& rng, uint64_t n);

}  // namespace negosim
