#include "negosim/rng.hpp"

#include <cmath>

namespace negosim {

double normal(std::mt19937_64& rng, double mean, double stddev) {
  // Box-Muller; u1 kept away from 0 so the log stays finite.
  double u1 = 0.0;
  do {
    u1 = uniform01(rng);
  } while (u1 <= 1e-300);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  return mean + stddev * r * std::cos(2.0 * M_PI * u2);
}

uint64_t uniform_index(std::mt19937_64& rng, uint64_t n) {
  if (n <= 1) return 0;
  const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace negosim
