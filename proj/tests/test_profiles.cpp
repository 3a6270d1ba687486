#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spg/lattice.hpp"
#include "spg/profiles.hpp"
#include "support/profile_gen.hpp"

#include <cmath>
#include <random>

using namespace spg;
using spg::testing::direct_laplacian;
using spg::testing::random_balanced_profile;
using spg::testing::random_sign_constrained_profile;

namespace {

IntegerProfile profile_from(std::int64_t lo, std::initializer_list<std::int64_t> values) {
  IntegerProfile f = IntegerProfile::over(lo, lo + static_cast<std::int64_t>(values.size()) - 1);
  std::int64_t x = lo;
  for (const auto v : values) f.ref(x++) = v;
  return f;
}

}  // namespace

TEST_CASE("anti-laplacian of the unit point-mass pattern") {
  const auto f = profile_from(-1, {1, -2, 1});
  const auto g = anti_laplacian_profile(f);
  CHECK(g == profile_from(0, {1}));
  CHECK(direct_laplacian(g) == f);
}

TEST_CASE("anti-laplacian of zero is zero") {
  CHECK(anti_laplacian_profile(IntegerProfile::zero()).empty());
  IntegerProfile z = IntegerProfile::over(-4, 4);
  CHECK(anti_laplacian_profile(z).empty());
}

TEST_CASE("moment violations are rejected") {
  CHECK_THROWS_AS(anti_laplacian_profile(profile_from(0, {1})), std::invalid_argument);
  CHECK_THROWS_AS(anti_laplacian_profile(profile_from(0, {1, -1})), std::invalid_argument);
  // balanced mass but nonzero center of mass
  CHECK_THROWS_AS(anti_laplacian_profile(profile_from(0, {1, 1, -2})), std::invalid_argument);
}

TEST_CASE("500 random moment-balanced profiles invert exactly") {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = random_balanced_profile(rng);
    REQUIRE(f.sum() == 0);
    REQUIRE(f.first_moment() == 0);
    const auto g = anti_laplacian_profile(f);
    CHECK(direct_laplacian(g) == f);
    // support containment: g lives strictly inside the support interval
    if (!g.empty()) {
      CHECK(g.support_min >= f.support_min + 1);
      CHECK(g.support_max <= f.support_max - 1);
    }
  }
}

TEST_CASE("no (-,+,-) pattern forces a nonnegative anti-laplacian") {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 500; ++trial) {
    const auto f = random_sign_constrained_profile(rng);
    REQUIRE(f.sum() == 0);
    REQUIRE(f.first_moment() == 0);
    REQUIRE(!f.has_minus_plus_minus());
    const auto g = anti_laplacian_profile(f);
    CHECK(g.nonnegative());
    CHECK(direct_laplacian(g) == f);
  }
}

TEST_CASE("sign pattern detector") {
  CHECK(profile_from(0, {-1, 1, -1}).has_minus_plus_minus());
  CHECK(!profile_from(0, {1, -1, 1}).has_minus_plus_minus());
  CHECK(!profile_from(0, {-1, -2, 3, 4}).has_minus_plus_minus());
  CHECK(profile_from(-5, {-1, 0, 0, 2, 0, -3}).has_minus_plus_minus());
  CHECK(!IntegerProfile::zero().has_minus_plus_minus());
}

TEST_CASE("constant-background profile at the reference parameters") {
  // d=2, h=2, eps=0.2, n=31416: rho = 1.05 sqrt(n/pi) = 105.0 up to rounding
  const auto p = constant_background_profile(2, 2, 31416, 0.2);
  CHECK(p.spread_radius == doctest::Approx(105.0).epsilon(1e-4));
  CHECK(p.clear_radius == 106);
  CHECK(p.slab_radius == 212);
  CHECK(p.f.sum() == 0);
  CHECK(p.f.first_moment() == 0);
  CHECK(p.f.value(0) == -2);
  CHECK(p.f.value(1) == -1);
  CHECK(p.f.value(105) == -1);
  CHECK(p.f.value(106) == 1);
  CHECK(p.f.value(211) == 1);
  CHECK(p.f.value(212) == 0);
  CHECK(p.f.is_even());
}

TEST_CASE("tiny constant-background profile reduces to the point-mass pattern") {
  // d=2, h=2 with r0 = 1: f(0) = -2, f(+-1) = 1, so g is the unit mass at 0
  // (reachable with n=1, eps small: rho < 1)
  const auto p = constant_background_profile(2, 2, 1, 0.1);
  REQUIRE(p.clear_radius == 1);
  REQUIRE(p.slab_radius == 2);
  CHECK(p.f == profile_from(-1, {1, -2, 1}));
  CHECK(anti_laplacian_profile(p.f) == profile_from(0, {1}));
}

TEST_CASE("d=3 h=4 profile shape") {
  const auto p = constant_background_profile(3, 4, 100000, 0.6);
  CHECK(p.f.value(0) == -4);
  CHECK(p.f.value(1) == -2);
  CHECK(p.f.value(p.clear_radius - 1) == -2);
  CHECK(p.f.value(p.clear_radius) == 1);
  CHECK(p.f.value(p.slab_radius - 1) == 1);
  CHECK(p.f.value(p.slab_radius) == 0);
  CHECK(p.slab_radius == 3 * p.clear_radius);
  CHECK(p.f.sum() == 0);
  CHECK(p.f.first_moment() == 0);
  // the proof's two inequalities: f <= d-1-h inside the clearing zone,
  // f <= 2d-1-h everywhere
  for (std::int64_t x = -p.clear_radius + 1; x < p.clear_radius; ++x)
    CHECK(p.f.value(x) <= 3 - 1 - 4);
  for (std::int64_t x = p.f.support_min; x <= p.f.support_max; ++x)
    CHECK(p.f.value(x) <= 2 * 3 - 1 - 4);
}

TEST_CASE("profile parameter validation") {
  CHECK_THROWS_AS(constant_background_profile(2, 1, 100, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(constant_background_profile(2, 3, 100, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(constant_background_profile(2, 2, 100, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(constant_background_profile(2, 2, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(lambda_background_profile(2, 0, 100, 0.1), std::invalid_argument);
}

TEST_CASE("lambda profile at the reference parameters") {
  // d=2, m=5, n=15000, eps=0.5: rho = 1.125 sqrt(15000/pi) ~ 77.73
  const auto p = lambda_background_profile(2, 5, 15000, 0.5);
  CHECK(p.spread_radius == doctest::Approx(77.73).epsilon(1e-3));
  CHECK(p.clear_radius == 78);
  CHECK(p.slab_radius == 5 * (2 * 78 - 1));
  CHECK(p.slab_radius == 775);
  CHECK(p.f.sum() == 0);
  CHECK(p.f.first_moment() == 0);
  CHECK(p.f.value(0) == -2);
  CHECK(p.f.value(1) == -2);   // off multiples: -d
  CHECK(p.f.value(5) == -1);   // multiples below r0: 1-d
  CHECK(p.f.value(77) == -2);
  CHECK(p.f.value(80) == 1);   // multiples in the pile-up band
  CHECK(p.f.value(81) == 0);
  CHECK(p.f.value(775) == 1);  // the band includes its endpoint
  CHECK(p.f.value(776) == 0);
  CHECK(p.f.is_even());
}

TEST_CASE("m=1 lambda profile collapses onto the constant profile at h=2d-2") {
  for (const Count n : {100, 5000, 31416}) {
    for (const int d : {2, 3}) {
      const auto a = lambda_background_profile(d, 1, n, 0.25);
      const auto b = constant_background_profile(d, 2 * d - 2, n, 0.25);
      CHECK(a.clear_radius == b.clear_radius);
      CHECK(a.f == b.f);
    }
  }
}

TEST_CASE("lambda profiles stay balanced across random parameters") {
  std::mt19937_64 rng(5050);
  std::uniform_int_distribution<std::int64_t> md(1, 9);
  std::uniform_int_distribution<Count> nd(1, 100000);
  std::uniform_real_distribution<double> ed(0.05, 1.5);
  for (int trial = 0; trial < 50; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 2);
    const auto p = lambda_background_profile(d, md(rng), nd(rng), ed(rng));
    CHECK(p.f.sum() == 0);
    CHECK(p.f.first_moment() == 0);
    CHECK(!p.f.has_minus_plus_minus());
    CHECK(anti_laplacian_profile(p.f).nonnegative());
  }
}

TEST_CASE("slab radius growth stays within the proof bound") {
  // r1 <= (d + eps/2)/(2d-1-h) (n/omega_d)^{1/d} + d
  for (const Count n : {1000, 31416, 100000}) {
    const auto p = constant_background_profile(2, 2, n, 0.2);
    const double bound =
        (2 + 0.1) / 1.0 * std::pow(static_cast<double>(n) / unit_ball_volume(2), 0.5) + 2;
    CHECK(static_cast<double>(p.slab_radius) <= bound);
  }
}
