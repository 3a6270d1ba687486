#include "spg/explosion.hpp"

#include "spg/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace spg {

namespace {

ExplosionOutcome fail(std::string reason, int stage = -1, std::optional<Box> face = {}) {
  ExplosionOutcome out;
  out.certified = false;
  out.failure_reason = std::move(reason);
  out.failing_stage = stage;
  out.failing_face = std::move(face);
  return out;
}

}  // namespace

ExplosionOutcome certify_explosion(const Background& background, Count n,
                                   std::int64_t target_radius, const Budget& budget) {
  const int d = background.dim();
  const Height floor = static_cast<Height>(2 * d - 2);
  const Height top = static_cast<Height>(2 * d - 1);
  if (target_radius < 1) throw std::invalid_argument("target radius must be >= 1");

  // hypothesis (i) on Q_{target+1}: the staged order replays stage-0
  // topplings on this background, which is legal exactly because heights
  // dominate the constant 2d-2 configuration pointwise.
  {
    std::optional<Point> bad;
    for_each_point(d, target_radius + 1, [&](const Point& p) {
      if (!bad && background(p) < floor) bad = p;
    });
    if (bad)
      return fail("background below 2d-2 at " + to_string(*bad) +
                  "; hypothesis (i) fails, stage-0 legality is not guaranteed");
  }

  // Stage 0: the topplings of the stabilization of Constant(2d-2) + n.
  const StabilizationResult stage0 =
      stabilize(Background::constant(d, floor), n, SchedulerSpec{}, budget);
  if (stage0.status != Status::Stable)
    return fail("stage-0 stabilization exhausted its budget", 0);
  std::int64_t r = stage0.toppled_radius;
  const bool origin_seeded = r < 0;
  if (origin_seeded) {
    // Degenerate stage 0: the reference stabilization performs no
    // topplings. If the origin is unstable on the real background (it can
    // hold up to 2d-1 there), topple it once and start from R_0 = Q_0.
    if (background(origin(d)) + n < 2 * d)
      return fail("no site topples at stage 0; raise n", 0);
    r = 0;
  } else {
    Count support = 0;
    for (Index i = 0; i < stage0.odometer.size(); ++i)
      if (stage0.odometer[i] > 0) ++support;
    Count cube = 1;
    for (int a = 0; a < d; ++a) cube *= 2 * r + 1;
    if (support != cube)
      return fail("stage-0 toppled set is not a cube (unexpected)", 0);
  }

  ExplosionOutcome out;
  out.certificate.initial_cube_radius = r;
  out.certificate.stage0_topplings = origin_seeded ? 1 : stage0.total_topplings;
  out.certificate.total_topplings = out.certificate.stage0_topplings;

  // Configuration after stage 0 on the real background:
  //   b + n d_o + Lap(u0) = stage0.final + (b - (2d-2)).
  const std::int64_t rw = std::max(target_radius, r) + 2;
  GridWindow h = background.window(rw);
  if (origin_seeded) {
    Height& o = h.at(origin(d));
    o = static_cast<Height>(o + n - 2 * d);
    for (int dir = 1; dir <= 2 * d; ++dir) ++h.at(direction_vector(d, dir));
  } else {
    const std::int64_t ro = stage0.final.radius();
    for_each_point(d, std::min(rw, ro), [&](const Point& p) {
      h.at(p) = static_cast<Height>(h.at(p) + stage0.final.at(p) - floor);
    });
  }

  Box box = Box::cube(d, r);
  Count budget_left = budget.max_topplings - out.certificate.stage0_topplings;
  auto stage_fail = [&](std::string reason, int stage, const Box& face) {
    out.certified = false;
    out.failure_reason = std::move(reason);
    out.failing_stage = stage;
    out.failing_face = face;
    return out;
  };
  for (int stage = 1; box.inscribed_cube_radius() < target_radius; ++stage) {
    const int direction = (stage - 1) % (2 * d) + 1;
    const Box face = outer_face_box(box, direction);

    // precondition: every face site holds >= 2d-1, at least one is unstable
    std::optional<Point> seed;
    std::optional<Point> low;
    for_each_point(face, [&](const Point& p) {
      const Height v = h.at(p);
      if (!low && v < top) low = p;
      if (!seed && v >= 2 * d) seed = p;
    });
    if (low)
      return stage_fail("face site " + to_string(*low) + " holds fewer than 2d-1 particles",
                        stage, face);
    if (!seed)
      return stage_fail(std::string("no unstable site in face") +
                            (stage <= 2 * d ? "; the stage-0 cube may be too small, raise n"
                                            : ""),
                        stage, face);

    // topple the whole face once, fanning out from the seed by L1 distance,
    // ties in flat (lexicographic) order
    std::vector<std::pair<std::int64_t, Point>> order;
    order.reserve(static_cast<std::size_t>(face.volume()));
    for_each_point(face, [&](const Point& p) {
      order.emplace_back((p - *seed).abs().sum(), p);
    });
    std::stable_sort(order.begin(), order.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (const auto& item : order) {
      const Point& p = item.second;
      Height& v = h.at(p);
      if (v < 2 * d)
        return stage_fail("face toppling at " + to_string(p) + " would be illegal", stage,
                          face);
      v = static_cast<Height>(v - 2 * d);
      for (int dir = 1; dir <= 2 * d; ++dir) {
        const Point q = p + direction_vector(d, dir);
        ++h.at(q);
      }
      if (--budget_left <= 0) return stage_fail("toppling budget exhausted", stage, face);
    }

    StageRecord rec;
    rec.direction = direction;
    rec.face = face;
    rec.seed = *seed;
    rec.topplings = face.volume();
    out.certificate.total_topplings += rec.topplings;
    out.certificate.stages.push_back(std::move(rec));

    if (direction <= d)
      box.hi[direction - 1] += 1;
    else
      box.lo[direction - d - 1] -= 1;
  }

  out.certified = true;
  out.certificate.covered_radius = box.inscribed_cube_radius();
  out.certificate.legality_checked = true;
  return out;
}

HypothesesReport check_explosion_hypotheses(const Background& background, std::int64_t r_min,
                                            std::int64_t r_max) {
  if (r_min < 0 || r_max < r_min)
    throw std::invalid_argument("hypotheses scan needs 0 <= r_min <= r_max");
  const int d = background.dim();
  const Height floor = static_cast<Height>(2 * d - 2);
  const Height top = static_cast<Height>(2 * d - 1);

  HypothesesReport rep;
  rep.r_min = r_min;
  rep.r_max = r_max;

  for_each_point(d, r_max + 1, [&](const Point& p) {
    if (background(p) < floor) {
      ++rep.below_floor_count;
      if (!rep.first_below_site) rep.first_below_site = p;
    }
  });
  rep.height_floor_ok = rep.below_floor_count == 0;

  std::int64_t last_fail = r_min - 1;
  for (std::int64_t r = r_min; r <= r_max; ++r) {
    const Box q = Box::cube(d, r);
    for (int dir = 1; dir <= 2 * d; ++dir) {
      bool found = false;
      for_each_point(outer_face_box(q, dir), [&](const Point& p) {
        if (!found && background(p) >= top) found = true;
      });
      if (!found) {
        rep.failing_faces.push_back({r, dir});
        last_fail = r;
      }
    }
  }
  if (last_fail < r_max) rep.faces_ok_from = last_fail + 1;
  return rep;
}

}  // namespace spg
