#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "spg/engine.hpp"
#include "spg/lattice.hpp"
#include "support/reference.hpp"

#include <random>

using namespace spg;
using spg::testing::matches_reference;
using spg::testing::random_instance;
using spg::testing::reference_stabilize;

namespace {

bool conserves_mass(const StabilizationResult& r) {
  const GridWindow before = initial_window(r);
  std::int64_t a = 0, b = 0;
  for (Index i = 0; i < before.size(); ++i) {
    a += before[i];
    b += r.final[i];
  }
  return a == b;
}

bool shell_odometer_zero(const StabilizationResult& r) {
  bool ok = true;
  for_each_point(r.odometer.dim(), r.odometer.radius(), [&](const Point& p) {
    if (cube_norm(p) == r.odometer.radius() && r.odometer.at(p) != 0) ok = false;
  });
  return ok;
}

}  // namespace

TEST_CASE("one particle on height 2 in d=2 does nothing") {
  const auto r = stabilize(Background::constant(2, 2), 1);
  CHECK(r.status == Status::Stable);
  CHECK(r.total_topplings == 0);
  CHECK(r.toppled_radius == -1);
  CHECK(r.final.at(origin(2)) == 3);
}

TEST_CASE("two particles on empty d=1 background topple the origin once") {
  for (const auto& s : SchedulerSpec::all()) {
    const auto r = stabilize(Background::constant(1, 0), 2, s);
    CHECK(r.status == Status::Stable);
    CHECK(r.total_topplings == 1);
    CHECK(r.final.at(make_point({-1})) == 1);
    CHECK(r.final.at(make_point({0})) == 0);
    CHECK(r.final.at(make_point({1})) == 1);
    CHECK(r.odometer.at(make_point({0})) == 1);
    CHECK(r.toppled_radius == 0);
    CHECK(r.visited_radius == 1);
    // cross-check against the brute-force reference
    CHECK(matches_reference(r, reference_stabilize(r.background, 2)));
  }
}

TEST_CASE("n=0 is a zero-toppling stable run") {
  const auto r = stabilize(Background::constant(2, 3), 0);
  CHECK(r.status == Status::Stable);
  CHECK(r.total_topplings == 0);
  CHECK((r.final.array() == 3).all());
}

TEST_CASE("engine matches the brute-force reference on random instances") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    auto [bg, n] = random_instance(rng, d);
    const auto r = stabilize(bg, n % 60);
    REQUIRE(r.status == Status::Stable);
    CHECK(matches_reference(r, reference_stabilize(bg, n % 60)));
  }
}

TEST_CASE("abelian invariance on a randomized small-instance suite") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    auto [bg, n] = random_instance(rng, d);
    const auto agreement = odometer_agreement(bg, n, SchedulerSpec::all(1 + trial));
    CHECK(agreement.equal());
    for (const auto& r : agreement.runs) {
      CHECK(conserves_mass(r));
      CHECK(laplacian_identity_holds(initial_window(r), r.final, r.odometer));
      CHECK(shell_odometer_zero(r));
    }
  }
}

TEST_CASE("odometer agreement reports over-budget runs as indeterminate") {
  Budget tiny;
  tiny.max_topplings = 10;
  const auto agreement =
      odometer_agreement(Background::constant(2, 2), 5000, SchedulerSpec::all(), tiny);
  CHECK(agreement.verdict == OdometerAgreement::Verdict::Indeterminate);
  CHECK(agreement.over_budget.size() == 4);
}

TEST_CASE("n=0 odometers agree trivially") {
  const auto agreement = odometer_agreement(Background::constant(2, 2), 0, SchedulerSpec::all());
  CHECK(agreement.equal());
  for (const auto& r : agreement.runs) CHECK(r.total_topplings == 0);
}

TEST_CASE("d=1 height 1 background, enumeration vs random seeds") {
  std::vector<SchedulerSpec> specs{SchedulerSpec::parse("enum"), SchedulerSpec::parse("random:1"),
                                   SchedulerSpec::parse("random:2"),
                                   SchedulerSpec::parse("random:3")};
  const auto agreement = odometer_agreement(Background::constant(1, 1), 7, specs);
  CHECK(agreement.equal());
}

TEST_CASE("budget exhaustion is a status, not an error") {
  Budget tiny;
  tiny.max_topplings = 100;
  const auto r = stabilize(Background::constant(2, 2), 100000, SchedulerSpec{}, tiny);
  CHECK(r.status == Status::BudgetExhausted);
  CHECK(r.exhausted_reason == "topplings");
  CHECK(r.total_topplings >= 100);

  Budget small_window;
  small_window.max_radius = 4;
  const auto rr = stabilize(Background::constant(2, 2), 100000, SchedulerSpec{}, small_window);
  CHECK(rr.status == Status::BudgetExhausted);
  CHECK(rr.exhausted_reason == "radius");
  CHECK(rr.final.radius() <= 4);
}

TEST_CASE("unstable background is rejected") {
  CHECK_THROWS_AS(Background::constant(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(stabilize(Background::constant(2, 2), -1), std::invalid_argument);
}

TEST_CASE("add_and_stabilize decomposes a fresh run") {
  SUBCASE("d=2 height 2: 5 then 3 equals 8") {
    const auto first = stabilize(Background::constant(2, 2), 5);
    const auto continued = add_and_stabilize(first, 3);
    const auto fresh = stabilize(Background::constant(2, 2), 8);
    CHECK(continued.n == 8);
    const std::int64_t rmax = std::max(continued.odometer.radius(), fresh.odometer.radius());
    bool same = true;
    for_each_point(2, rmax, [&](const Point& p) {
      if (continued.odometer.value_or_zero(p) != fresh.odometer.value_or_zero(p)) same = false;
      const Height a = continued.final.contains(p) ? continued.final.at(p) : 2;
      const Height b = fresh.final.contains(p) ? fresh.final.at(p) : 2;
      if (a != b) same = false;
    });
    CHECK(same);
    CHECK(continued.total_topplings == fresh.total_topplings);
  }
  SUBCASE("adding zero changes nothing") {
    const auto first = stabilize(Background::constant(2, 2), 20);
    const auto same = add_and_stabilize(first, 0);
    CHECK(same.final == first.final);
    CHECK(same.odometer == first.odometer);
    CHECK(same.total_topplings == first.total_topplings);
  }
  SUBCASE("d=1 height 1: 1 then 1 equals 2, against the reference") {
    const auto first = stabilize(Background::constant(1, 1), 1);
    const auto continued = add_and_stabilize(first, 1);
    CHECK(matches_reference(continued, reference_stabilize(Background::constant(1, 1), 2)));
  }
  SUBCASE("continuation requires a stable result") {
    Budget tiny;
    tiny.max_topplings = 3;
    const auto r = stabilize(Background::constant(2, 2), 1000, SchedulerSpec{}, tiny);
    CHECK_THROWS_AS(add_and_stabilize(r, 1), std::invalid_argument);
  }
}

TEST_CASE("toppled sets are nested in n") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    auto [bg, n_raw] = random_instance(rng, d);
    const Count n = n_raw % 150;
    const auto small = stabilize(bg, n);
    const auto big = stabilize(bg, n + 1 + static_cast<Count>(rng() % 20));
    bool nested = true;
    for_each_point(d, small.odometer.radius(), [&](const Point& p) {
      if (small.odometer.at(p) > 0 && big.odometer.value_or_zero(p) == 0) nested = false;
    });
    CHECK(nested);
  }
}

TEST_CASE("stable results: heights below 2d and identity final = initial + lap(odometer)") {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 15; ++trial) {
    const int d = 1 + static_cast<int>(rng() % 3);
    auto [bg, n] = random_instance(rng, d);
    const auto r = stabilize(bg, n);
    REQUIRE(r.status == Status::Stable);
    CHECK((r.final.array() < 2 * d).all());
    CHECK(laplacian_identity_holds(initial_window(r), r.final, r.odometer));
    CHECK(conserves_mass(r));
    CHECK(shell_odometer_zero(r));
  }
}

TEST_CASE("scheduler parsing") {
  CHECK(SchedulerSpec::parse("enum").kind == SchedulerSpec::Kind::EnumerationOrder);
  CHECK(SchedulerSpec::parse("parallel").kind == SchedulerSpec::Kind::ParallelSweep);
  CHECK(SchedulerSpec::parse("nested").kind == SchedulerSpec::Kind::NestedVolumes);
  CHECK(SchedulerSpec::parse("random:77").seed == 77);
  CHECK(SchedulerSpec::parse("random").seed == 0);
  CHECK_THROWS_AS(SchedulerSpec::parse("bogus"), std::invalid_argument);
  CHECK(SchedulerSpec::parse("random:9").name() == "random:9");
}
