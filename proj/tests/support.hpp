#pragma once

#include <cmath>
#include <random>

#include "crkfr/state.hpp"

namespace crkfr::test {

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(20240917);
  return g;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline State random_state(int n, double lo = -1.0, double hi = 1.0) {
  State u{};
  for (int k = 0; k < n; ++k) u[k] = uniform(lo, hi);
  return u;
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }

}  // namespace crkfr::test
