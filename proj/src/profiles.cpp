#include "spg/profiles.hpp"

#include "spg/lattice.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace spg {

IntegerProfile IntegerProfile::over(std::int64_t lo, std::int64_t hi) {
  if (hi < lo) return zero();
  IntegerProfile p;
  p.support_min = lo;
  p.support_max = hi;
  p.values = Eigen::Array<std::int64_t, Eigen::Dynamic, 1>::Zero(hi - lo + 1);
  return p;
}

std::int64_t IntegerProfile::sum() const { return empty() ? 0 : values.sum(); }

std::int64_t IntegerProfile::first_moment() const {
  std::int64_t s = 0;
  for (std::int64_t x = support_min; x <= support_max; ++x) s += x * value(x);
  return s;
}

bool IntegerProfile::nonnegative() const { return empty() || (values >= 0).all(); }

bool IntegerProfile::is_even() const {
  const std::int64_t m = std::max(std::abs(support_min), std::abs(support_max));
  for (std::int64_t x = 1; x <= m; ++x)
    if (value(x) != value(-x)) return false;
  return true;
}

bool IntegerProfile::has_minus_plus_minus() const {
  // scan for a positive strictly between two negatives
  int state = 0;  // 0: nothing, 1: saw -, 2: saw - then +
  for (std::int64_t x = support_min; x <= support_max; ++x) {
    const std::int64_t v = value(x);
    if (v < 0) {
      if (state == 2) return true;
      state = std::max(state, 1);
    } else if (v > 0 && state >= 1) {
      state = 2;
    }
  }
  return false;
}

IntegerProfile IntegerProfile::trimmed() const {
  std::int64_t lo = support_min, hi = support_max;
  while (lo <= hi && value(lo) == 0) ++lo;
  while (hi >= lo && value(hi) == 0) --hi;
  if (hi < lo) return zero();
  IntegerProfile out = over(lo, hi);
  for (std::int64_t x = lo; x <= hi; ++x) out.ref(x) = value(x);
  return out;
}

bool IntegerProfile::operator==(const IntegerProfile& o) const {
  const IntegerProfile a = trimmed(), b = o.trimmed();
  if (a.empty() || b.empty()) return a.empty() && b.empty();
  return a.support_min == b.support_min && a.support_max == b.support_max &&
         (a.values == b.values).all();
}

std::string IntegerProfile::to_string() const {
  std::ostringstream out;
  out << "[" << support_min << "," << support_max << "]:";
  for (std::int64_t x = support_min; x <= support_max; ++x) out << " " << value(x);
  return out.str();
}

IntegerProfile profile_laplacian(const IntegerProfile& g) {
  if (g.empty()) return IntegerProfile::zero();
  IntegerProfile f = IntegerProfile::over(g.support_min - 1, g.support_max + 1);
  for (std::int64_t x = f.support_min; x <= f.support_max; ++x)
    f.ref(x) = g.value(x + 1) - 2 * g.value(x) + g.value(x - 1);
  return f.trimmed();
}

IntegerProfile anti_laplacian_profile(const IntegerProfile& f) {
  const IntegerProfile ft = f.trimmed();
  if (ft.empty()) return IntegerProfile::zero();
  if (ft.sum() != 0 || ft.first_moment() != 0)
    throw std::invalid_argument("anti_laplacian_profile: moment conditions violated (sum=" +
                                std::to_string(ft.sum()) +
                                ", first moment=" + std::to_string(ft.first_moment()) + ")");
  const std::int64_t lo = ft.support_min, hi = ft.support_max;
  if (hi - 1 < lo + 1) return IntegerProfile::zero();
  IntegerProfile g = IntegerProfile::over(lo + 1, hi - 1);
  std::int64_t s0 = 0, s1 = 0;  // prefix sums of f and of y f(y)
  for (std::int64_t x = lo + 1; x <= hi - 1; ++x) {
    s0 += ft.value(x - 1);
    s1 += (x - 1) * ft.value(x - 1);
    g.ref(x) = x * s0 - s1;
  }
  return g;
}

namespace {

double spread_radius_estimate(int d, Count n, double eps) {
  return (1.0 + eps / (2.0 * d)) * std::pow(static_cast<double>(n) / unit_ball_volume(d),
                                            1.0 / d);
}

void verify_moments(const IntegerProfile& f, const char* what) {
  if (f.sum() != 0)
    throw std::logic_error(std::string(what) + ": profile mass " + std::to_string(f.sum()) +
                           " != 0 (r0/r1 rounding is off by one)");
  if (f.first_moment() != 0)
    throw std::logic_error(std::string(what) + ": profile first moment " +
                           std::to_string(f.first_moment()) + " != 0");
}

}  // namespace

SlabProfile constant_background_profile(int d, int h, Count n, double eps) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (h < d || h > 2 * d - 2)
    throw std::invalid_argument("constant profile needs d <= h <= 2d-2, got h=" +
                                std::to_string(h));
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (n < 1) throw std::invalid_argument("n must be >= 1");

  SlabProfile out;
  out.spread_radius = spread_radius_estimate(d, n, eps);
  const std::int64_t step = 2 * d - 1 - h;
  // smallest multiple of 2d-1-h strictly exceeding rho
  out.clear_radius = step * (static_cast<std::int64_t>(std::floor(out.spread_radius / step)) + 1);
  out.slab_radius = d * out.clear_radius / step;

  const std::int64_t r0 = out.clear_radius, r1 = out.slab_radius;
  IntegerProfile f = IntegerProfile::over(1 - r1, r1 - 1);
  for (std::int64_t x = 1 - r1; x <= r1 - 1; ++x) {
    const std::int64_t ax = std::abs(x);
    if (ax == 0)
      f.ref(x) = 2 * (d - 1 - h);
    else if (ax < r0)
      f.ref(x) = d - 1 - h;
    else
      f.ref(x) = 2 * d - 1 - h;
  }
  verify_moments(f, "constant_background_profile");
  out.f = std::move(f);
  return out;
}

SlabProfile lambda_background_profile(int d, std::int64_t m, Count n, double eps) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (m < 1) throw std::invalid_argument("modulus must be >= 1");
  if (eps <= 0) throw std::invalid_argument("eps must be positive");
  if (n < 1) throw std::invalid_argument("n must be >= 1");

  SlabProfile out;
  out.spread_radius = spread_radius_estimate(d, n, eps);
  out.clear_radius = static_cast<std::int64_t>(std::floor(out.spread_radius)) + 1;
  out.slab_radius = m * (d * out.clear_radius - 1);

  const std::int64_t r0 = out.clear_radius, r1 = out.slab_radius;
  // The pile-up band is inclusive of r1 (a multiple of m): with the band
  // open at r1 the profile mass comes out as -2 for every parameter
  // choice, and the m=1 case would not collapse onto the constant-h
  // profile. Including the endpoint restores both.
  IntegerProfile f = IntegerProfile::over(-r1, r1);
  for (std::int64_t x = -r1; x <= r1; ++x) {
    const std::int64_t ax = std::abs(x);
    if (ax == 0)
      f.ref(x) = 2 - 2 * d;
    else if (ax < r0)
      f.ref(x) = x % m == 0 ? 1 - d : -d;
    else
      f.ref(x) = x % m == 0 ? 1 : 0;
  }
  verify_moments(f, "lambda_background_profile");
  out.f = std::move(f);
  return out;
}

}  // namespace spg
