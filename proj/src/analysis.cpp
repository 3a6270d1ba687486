#include "spg/analysis.hpp"

#include "spg/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace spg {

GrowthRecord summarize_growth(const StabilizationResult& result) {
  GrowthRecord r;
  r.d = result.background.dim();
  r.background = result.background.descriptor();
  r.n = result.n;
  r.radius_T = result.toppled_radius;
  r.radius_S = result.visited_radius;
  r.scheduler = result.scheduler.name();
  r.seconds = result.seconds;
  r.total_topplings = result.total_topplings;
  r.status = result.status;
  r.bound_value = std::numeric_limits<double>::quiet_NaN();

  r.is_exact_cube = true;  // vacuously true for the empty set
  if (r.radius_T >= 0) {
    Count support = 0;
    for (Index i = 0; i < result.odometer.size(); ++i)
      if (result.odometer[i] > 0) ++support;
    Count cube = 1;
    for (int a = 0; a < r.d; ++a) cube *= 2 * r.radius_T + 1;
    r.is_exact_cube = support == cube;
  }
  return r;
}

GrowthRecord measure_growth(const Background& background, Count n,
                            const SchedulerSpec& scheduler, const Budget& budget) {
  return summarize_growth(stabilize(background, n, scheduler, budget));
}

std::string growth_record_csv_header() {
  return "d,background,n,radius_T,radius_S,is_exact_cube,bound_value,scheduler,seconds,"
         "total_topplings,status";
}

std::string growth_record_csv_row(const GrowthRecord& r) {
  std::ostringstream out;
  out << r.d << "," << r.background << "," << r.n << "," << r.radius_T << "," << r.radius_S
      << "," << (r.is_exact_cube ? 1 : 0) << ",";
  if (std::isnan(r.bound_value))
    out << "";
  else
    out << r.bound_value;
  out << "," << r.scheduler << "," << r.seconds << "," << r.total_topplings << ","
      << to_string(r.status);
  return out.str();
}

double growth_bound_constant(int d, int h, Count n, double eps) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (h < d || h > 2 * d - 2)
    throw std::invalid_argument("constant-background bound needs d <= h <= 2d-2");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  return (d + eps) / (2.0 * d - 1 - h) *
         std::pow(static_cast<double>(n) / unit_ball_volume(d), 1.0 / d);
}

double growth_bound_lambda(int d, std::int64_t m, Count n, double eps) {
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  if (m < 1) throw std::invalid_argument("modulus must be >= 1");
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  return static_cast<double>(m) * (d + eps) *
         std::pow(static_cast<double>(n) / unit_ball_volume(d), 1.0 / d);
}

namespace {

bool in_visited_set(const StabilizationResult& res, const Point& p) {
  if (res.odometer.value_or_zero(p) > 0) return true;
  const int d = res.background.dim();
  for (int dir = 1; dir <= 2 * d; ++dir) {
    if (res.odometer.value_or_zero(p + direction_vector(d, dir)) > 0) return true;
  }
  return false;
}

}  // namespace

BallCheck inner_bound_check(const StabilizationResult& result, int h, double allowance) {
  if (result.status != Status::Stable)
    throw std::invalid_argument("inner_bound_check needs a Stable run");
  const int d = result.background.dim();
  if (h > 2 * d - 2) throw std::invalid_argument("inner bound needs h <= 2d-2");
  const double r = std::pow(static_cast<double>(result.n) / unit_ball_volume(d), 1.0 / d);
  const double c1 = std::pow(2.0 * d - 1 - h, -1.0 / d);

  BallCheck check;
  check.ball_radius = c1 * r - allowance;
  if (check.ball_radius <= 0) {
    check.ok = true;
    check.skipped = true;
    return check;
  }
  check.ok = true;
  const double rr = check.ball_radius * check.ball_radius;
  const std::int64_t reach = static_cast<std::int64_t>(std::ceil(check.ball_radius));
  for_each_point(d, reach, [&](const Point& p) {
    if (!check.ok) return;
    if (static_cast<double>(norm2(p)) < rr && !in_visited_set(result, p)) {
      check.ok = false;
      check.witness = p;
    }
  });
  return check;
}

BallCheck outer_bound_lowh_check(const StabilizationResult& result, int h, double eps,
                                 double allowance) {
  if (result.status != Status::Stable)
    throw std::invalid_argument("outer_bound_lowh_check needs a Stable run");
  const int d = result.background.dim();
  if (h > d - 1)
    throw std::invalid_argument("the low-background outer bound applies only for h <= d-1");
  if (eps <= 0 || eps >= d - h)
    throw std::invalid_argument("outer bound needs 0 < eps < d - h");
  const double r = std::pow(static_cast<double>(result.n) / unit_ball_volume(d), 1.0 / d);
  const double c1p = std::pow(d - eps - h, -1.0 / d);

  BallCheck check;
  check.ball_radius = c1p * r + allowance;
  check.ok = true;
  const double rr = check.ball_radius * check.ball_radius;
  // scan the visited set: odometer support plus its boundary
  const std::int64_t reach = result.visited_radius;
  if (reach < 0) return check;  // empty visited set, vacuously inside
  for_each_point(d, reach, [&](const Point& p) {
    if (!check.ok) return;
    if (in_visited_set(result, p) && static_cast<double>(norm2(p)) >= rr) {
      check.ok = false;
      check.witness = p;
    }
  });
  return check;
}

BoxesOutcome robust_boxes_experiment(int d, const std::vector<std::int64_t>& shell_radii,
                                     Height interior_h, Height shell_h, int particles,
                                     const SchedulerSpec& scheduler, const Budget& budget) {
  if (particles < 1) throw std::invalid_argument("need at least one particle");
  if (static_cast<std::size_t>(particles) > shell_radii.size())
    throw std::invalid_argument("need one shell radius per added particle");
  if (shell_h > 2 * d - 2)
    throw std::invalid_argument("shell heights must be at most 2d-2");
  const Background bg = Background::boxes(d, interior_h, shell_h, shell_radii);
  std::vector<std::int64_t> sorted = shell_radii;
  std::sort(sorted.begin(), sorted.end());

  BoxesOutcome out;
  StabilizationResult run = stabilize(bg, 0, scheduler, budget);
  for (int k = 1; k <= particles; ++k) {
    run = add_and_stabilize(run, 1, scheduler, budget);
    if (run.status != Status::Stable) {
      out.detail = "budget exhausted after particle " + std::to_string(k);
      out.violated_at = k;
      return out;
    }
    out.particles_added = k;
    out.toppled_radii.push_back(run.toppled_radius);
    if (run.toppled_radius > sorted[static_cast<std::size_t>(k - 1)]) {
      out.violated_at = k;
      out.violating_radius = run.toppled_radius;
      out.detail = "toppled set reached radius " + std::to_string(run.toppled_radius) +
                   " > " + std::to_string(sorted[static_cast<std::size_t>(k - 1)]) +
                   " after particle " + std::to_string(k);
      return out;
    }
  }
  out.ok = true;
  return out;
}

ReductionReport dimensional_reduction(Count n, int d, double lambda, Count m_min, Count m_max,
                                      const SchedulerSpec& scheduler, const Budget& budget,
                                      int workers) {
  (void)workers;
  if (d < 2) throw std::invalid_argument("dimensional reduction needs d >= 2");
  if (lambda <= 0 || lambda >= 1) throw std::invalid_argument("lambda must be in (0,1)");
  if (m_min < 1 || m_max < m_min) throw std::invalid_argument("bad m search range");

  const Height floor_d = static_cast<Height>(2 * d - 2);
  const StabilizationResult pile =
      stabilize(Background::constant(d, floor_d), n, scheduler, budget);
  if (pile.status != Status::Stable)
    throw std::runtime_error("dimensional_reduction: d-dimensional pile over budget");

  ReductionReport rep;
  rep.n = n;
  rep.d = d;
  rep.lambda = lambda;
  rep.rad = pile.toppled_radius;
  if (rep.rad < 1) throw std::runtime_error("dimensional_reduction: pile did not spread");

  const std::int64_t inner = static_cast<std::int64_t>(lambda * static_cast<double>(rep.rad));
  if (inner >= rep.rad) throw std::invalid_argument("empty annulus: lambda too large");

  // slice through the origin, x_d = 0
  const int ds = d - 1;
  GridWindow slice(ds, rep.rad);
  {
    Point q(d);
    q[d - 1] = 0;
    Index i = 0;
    for_each_point(ds, rep.rad, [&](const Point& p) {
      for (int a = 0; a < ds; ++a) q[a] = p[a];
      slice[i++] = pile.final.at(q);
    });
  }

  // mass bracket: excess slice mass should equal the candidate particle count
  Count mass = 0;
  for (Index i = 0; i < slice.size(); ++i) mass += slice[i] - floor_d;
  rep.mass_estimate = mass;

  const Height floor_s = static_cast<Height>(2 * ds - 2);
  std::map<Count, double> memo;
  auto fraction_of = [&](Count m) {
    auto it = memo.find(m);
    if (it != memo.end()) return it->second;
    const StabilizationResult cand =
        stabilize(Background::constant(ds, floor_s), m, scheduler, budget);
    if (cand.status != Status::Stable)
      throw std::runtime_error("dimensional_reduction: candidate pile over budget");
    Count mismatches = 0, size = 0;
    for_each_point(ds, rep.rad, [&](const Point& p) {
      const std::int64_t norm = cube_norm(p);
      if (norm <= inner) return;
      ++size;
      const Height want = slice.at(p);
      const Height have = static_cast<Height>(
          2 + (cand.final.contains(p) ? cand.final.at(p) : floor_s));
      if (want != have) ++mismatches;
    });
    const double frac = size == 0 ? 0.0 : 1.0 - static_cast<double>(mismatches) /
                                                    static_cast<double>(size);
    memo[m] = frac;
    rep.trace.emplace_back(m, frac);
    if (frac > rep.match_fraction ||
        (frac == rep.match_fraction && (rep.best_m == 0 || m < rep.best_m))) {
      rep.match_fraction = frac;
      rep.best_m = m;
      rep.mismatch_count = mismatches;
      rep.annulus_size = size;
    }
    return frac;
  };

  const Count start = std::clamp(mass, m_min, m_max);
  fraction_of(start);
  Count step = std::max<Count>(1, (m_max - m_min) / 64);
  Count at = start;
  while (step >= 1) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (const Count cand : {at - step, at + step}) {
        if (cand < m_min || cand > m_max) continue;
        if (fraction_of(cand) > fraction_of(at)) {
          at = cand;
          moved = true;
        }
      }
    }
    if (step == 1) break;
    step /= 2;
  }
  return rep;
}

}  // namespace spg
