#pragma once

// Test-only profile generators and a direct 1-d Laplacian oracle.

#include "spg/profiles.hpp"

#include <random>

namespace spg::testing {

/// Laplacian written out directly, independent of the library path.
inline IntegerProfile direct_laplacian(const IntegerProfile& g) {
  IntegerProfile f = IntegerProfile::over(g.support_min - 1, g.support_max + 1);
  for (std::int64_t x = f.support_min; x <= f.support_max; ++x)
    f.ref(x) = g.value(x + 1) - 2 * g.value(x) + g.value(x - 1);
  return f;
}

/// Random profile with both moments zero: free draws everywhere except the
/// last two adjacent cells, which solve the 2x2 integer system (adjacent
/// positions make it solvable over the integers).
inline IntegerProfile random_balanced_profile(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> edge(-30, 26);
  std::uniform_int_distribution<std::int64_t> len(3, 25);
  std::uniform_int_distribution<std::int64_t> val(-8, 8);
  const std::int64_t lo = edge(rng);
  const std::int64_t hi = std::min<std::int64_t>(lo + len(rng), 30);
  IntegerProfile f = IntegerProfile::over(lo, hi);
  for (std::int64_t x = lo; x <= hi - 2; ++x) f.ref(x) = val(rng);
  std::int64_t s0 = 0, s1 = 0;
  for (std::int64_t x = lo; x <= hi - 2; ++x) {
    s0 += f.value(x);
    s1 += x * f.value(x);
  }
  const std::int64_t b = -s1 + (hi - 1) * s0;
  const std::int64_t a = -s0 - b;
  f.ref(hi - 1) = a;
  f.ref(hi) = b;
  return f;
}

/// Random even profile, nonpositive inside and nonnegative outside, so the
/// (-,+,-) pattern cannot occur; masses balance through the center value.
inline IntegerProfile random_sign_constrained_profile(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::int64_t> r0d(1, 10), r1d(1, 10), val(0, 5);
  for (;;) {
    const std::int64_t r0 = r0d(rng);
    const std::int64_t r1 = r0 + r1d(rng);
    IntegerProfile f = IntegerProfile::over(-r1, r1);
    std::int64_t outer = 0, inner = 0;
    for (std::int64_t x = r0; x <= r1; ++x) {
      f.ref(x) = val(rng);
      f.ref(-x) = f.value(x);
      outer += f.value(x);
    }
    for (std::int64_t x = 1; x < r0; ++x) {
      f.ref(x) = -val(rng);
      f.ref(-x) = f.value(x);
      inner += f.value(x);
    }
    const std::int64_t center = -2 * (outer + inner);
    if (center > 0) continue;
    f.ref(0) = center;
    return f;
  }
}

}  // namespace spg::testing
