#pragma once

#include "spg/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>

namespace spg {

/// A finitely supported integer function on Z.
struct IntegerProfile {
  std::int64_t support_min = 0;
  std::int64_t support_max = -1;  // empty when support_max < support_min
  Eigen::Array<std::int64_t, Eigen::Dynamic, 1> values;

  static IntegerProfile zero() { return {}; }
  static IntegerProfile over(std::int64_t lo, std::int64_t hi);

  bool empty() const { return support_max < support_min; }
  std::int64_t length() const { return empty() ? 0 : support_max - support_min + 1; }

  std::int64_t value(std::int64_t x) const {
    if (x < support_min || x > support_max) return 0;
    return values[x - support_min];
  }
  std::int64_t& ref(std::int64_t x) { return values[x - support_min]; }

  std::int64_t sum() const;           // sum_y f(y)
  std::int64_t first_moment() const;  // sum_y y f(y)
  bool nonnegative() const;
  bool is_even() const;  // f(x) == f(-x)

  /// True when some x1 < x2 < x3 have f(x1) < 0, f(x2) > 0, f(x3) < 0.
  bool has_minus_plus_minus() const;

  /// Same function with the support shrunk to the nonzero extent.
  IntegerProfile trimmed() const;

  bool operator==(const IntegerProfile& o) const;

  std::string to_string() const;
};

/// One-dimensional Laplacian f(x) = g(x+1) - 2 g(x) + g(x-1); support
/// widens by one on each side.
IntegerProfile profile_laplacian(const IntegerProfile& g);

/// The compactly supported g with profile_laplacian(g) == f, by the exact
/// second-antiderivative formula g(x) = sum_{y <= x-1} (x - y) f(y).
/// Requires sum f == 0 and sum y f(y) == 0; throws otherwise. If f has no
/// sign pattern (-,+,-) the result is additionally nonnegative.
IntegerProfile anti_laplacian_profile(const IntegerProfile& f);

/// A slab-clearing modification profile: toppling by its antiderivative
/// clears the background down to at most d-1 inside |x| < clear_radius and
/// piles it up to at most 2d-1 out to slab_radius.
struct SlabProfile {
  IntegerProfile f;
  double spread_radius = 0;       // low-background spread estimate (rho)
  std::int64_t clear_radius = 0;  // r0
  std::int64_t slab_radius = 0;   // r1
};

/// Profile for constant background height h (d <= h <= 2d-2):
///   f(0) = 2(d-1-h), f = d-1-h on 0 < |x| < r0, f = 2d-1-h on
///   r0 <= |x| < r1, with r0 the smallest multiple of 2d-1-h exceeding
///   rho = (1 + eps/2d)(n / omega_d)^{1/d} and r1 = d r0 / (2d-1-h).
SlabProfile constant_background_profile(int d, int h, Count n, double eps);

/// Profile for the lambda-augmented background 2d-2 + 1 off multiples of m:
///   f(0) = 2-2d; on 0 < |x| < r0: -d off multiples of m, 1-d on them;
///   on r0 <= |x| <= r1: +1 on multiples of m, 0 off them; with r0 the
///   smallest integer exceeding rho and r1 = m(d r0 - 1). Both moment
///   conditions are re-verified numerically before returning.
SlabProfile lambda_background_profile(int d, std::int64_t m, Count n, double eps);

}  // namespace spg
