#pragma once

// Test-only reference machinery, deliberately independent of the engine:
// a map-based stabilizer that topples one unstable site at a time with no
// window bookkeeping, and a generator of random robust instances.

#include "spg/background.hpp"
#include "spg/engine.hpp"
#include "spg/types.hpp"

#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <vector>

namespace spg::testing {

struct ReferenceResult {
  std::map<Point, Height, PointLess> heights;  // only touched sites appear
  std::map<Point, Count, PointLess> odometer;
  Count total = 0;
};

/// Stabilizes background + n at the origin by repeatedly toppling the
/// first unstable site in lexicographic order. Any legal order gives the
/// same answer, which is the point of using it as an oracle.
inline ReferenceResult reference_stabilize(const Background& bg, Count n,
                                           Count max_topplings = 20'000'000) {
  const int d = bg.dim();
  const Height top = static_cast<Height>(2 * d - 1);
  ReferenceResult res;
  auto height_of = [&](const Point& p) -> Height& {
    auto it = res.heights.find(p);
    if (it == res.heights.end()) it = res.heights.emplace(p, bg(p)).first;
    return it->second;
  };
  std::set<Point, PointLess> unstable;
  {
    Height& h = height_of(origin(d));
    h = static_cast<Height>(h + n);
    if (h > top) unstable.insert(origin(d));
  }
  while (!unstable.empty()) {
    const Point p = *unstable.begin();
    unstable.erase(unstable.begin());
    Height& h = height_of(p);
    if (h <= top) continue;
    h = static_cast<Height>(h - 2 * d);
    ++res.odometer[p];
    if (++res.total > max_topplings)
      throw std::runtime_error("reference_stabilize: toppling limit hit");
    if (h > top) unstable.insert(p);
    for (int dir = 1; dir <= 2 * d; ++dir) {
      const Point q = p + direction_vector(d, dir);
      Height& hq = height_of(q);
      hq = static_cast<Height>(hq + 1);
      if (hq > top) unstable.insert(q);
    }
  }
  return res;
}

/// Compares an engine run against the reference site-for-site.
inline bool matches_reference(const StabilizationResult& run, const ReferenceResult& ref) {
  for (const auto& [p, u] : ref.odometer) {
    if (run.odometer.value_or_zero(p) != u) return false;
  }
  Count engine_support = 0, ref_support = 0;
  for (Index i = 0; i < run.odometer.size(); ++i)
    if (run.odometer[i] > 0) ++engine_support;
  for (const auto& [p, u] : ref.odometer)
    if (u > 0) ++ref_support;
  if (engine_support != ref_support) return false;
  for (const auto& [p, h] : ref.heights) {
    const Height engine_h = run.final.contains(p) ? run.final.at(p) : run.background(p);
    if (engine_h != h) return false;
  }
  return run.total_topplings == ref.total;
}

/// Random robust instance: every kind keeps its maximum height at most
/// 2d-2, which guarantees finite stabilization for any n.
inline std::pair<Background, Count> random_instance(std::mt19937_64& rng, int d) {
  const Height cap = static_cast<Height>(2 * d - 2);
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_int_distribution<Count> particles(0, 300);
  const Count n = particles(rng);
  switch (kind(rng)) {
    case 0: {
      std::uniform_int_distribution<int> h(-2, cap);
      return {Background::constant(d, static_cast<Height>(h(rng))), n};
    }
    case 1: {
      std::uniform_int_distribution<int> h(-2, cap - 1);
      std::uniform_int_distribution<std::int64_t> m(2, 7);
      return {Background::lambda_augmented(d, static_cast<Height>(h(rng)), m(rng)), n};
    }
    case 2: {
      std::uniform_int_distribution<int> h(-2, cap - 1);
      std::uniform_int_distribution<std::int64_t> entry(-3, 3);
      for (;;) {
        Background::GeneratorMatrix g(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j) g(i, j) = entry(rng);
        try {
          return {Background::lattice_augmented(d, static_cast<Height>(h(rng)), g), n};
        } catch (const std::invalid_argument&) {
          // singular or gcd violation, draw again
        }
      }
    }
    case 3: {
      std::uniform_int_distribution<int> h(-2, cap - 1);
      std::uniform_real_distribution<double> eps(0.05, 0.95);
      return {Background::bernoulli_augmented(d, static_cast<Height>(h(rng)), eps(rng), rng()),
              n};
    }
    default: {
      std::uniform_int_distribution<int> h(0, cap);
      std::uniform_int_distribution<std::int64_t> step(2, 5);
      const std::int64_t s = step(rng);
      std::vector<std::int64_t> radii;
      for (std::int64_t r = s; radii.size() < 12; r += s) radii.push_back(r);
      return {Background::boxes(d, static_cast<Height>(h(rng)), static_cast<Height>(h(rng) / 2),
                                radii),
              n};
    }
  }
}

}  // namespace spg::testing
