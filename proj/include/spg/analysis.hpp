#pragma once

#include "spg/background.hpp"
#include "spg/engine.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spg {

struct GrowthRecord {
  int d = 0;
  std::string background;
  Count n = 0;
  std::int64_t radius_T = -1;  // cube radius of the toppled set (-1: empty)
  std::int64_t radius_S = -1;  // cube radius of toppled set + boundary
  bool is_exact_cube = false;
  double bound_value = 0;  // filled by bound comparisons; NaN when unused
  std::string scheduler;
  double seconds = 0;
  Count total_topplings = 0;
  Status status = Status::Stable;
};

/// Summarizes a finished run; is_exact_cube means the toppled set equals
/// the full centered cube of its radius (vacuously true when empty).
GrowthRecord summarize_growth(const StabilizationResult& result);

/// Runs the engine and summarizes.
GrowthRecord measure_growth(const Background& background, Count n,
                            const SchedulerSpec& scheduler = {}, const Budget& budget = {});

std::string growth_record_csv_header();
std::string growth_record_csv_row(const GrowthRecord& r);

/// Radius bound (d + eps)/(2d-1-h) (n/omega_d)^{1/d} for constant
/// background h with d <= h <= 2d-2.
double growth_bound_constant(int d, int h, Count n, double eps);

/// Radius bound m (d + eps) (n/omega_d)^{1/d} for the lambda-augmented
/// background 2d-2 + 1 off multiples of m.
double growth_bound_lambda(int d, std::int64_t m, Count n, double eps);

struct BallCheck {
  bool ok = false;
  bool skipped = false;  // degenerate radius, nothing to check
  double ball_radius = 0;
  std::optional<Point> witness;
};

/// Inner containment: every lattice point of the Euclidean ball of radius
/// (2d-1-h)^{-1/d} (n/omega_d)^{1/d} - allowance lies in the visited set
/// S_n of the run (toppled sites plus their boundary).
BallCheck inner_bound_check(const StabilizationResult& result, int h, double allowance);

/// Outer containment for low backgrounds h <= d-1: the visited set S_n
/// lies inside the Euclidean ball of radius
/// (d-eps-h)^{-1/d} (n/omega_d)^{1/d} + allowance.
BallCheck outer_bound_lowh_check(const StabilizationResult& result, int h, double eps,
                                 double allowance);

struct BoxesOutcome {
  bool ok = false;
  int particles_added = 0;
  int violated_at = -1;  // k of the first containment failure
  std::int64_t violating_radius = -1;
  std::vector<std::int64_t> toppled_radii;  // cumulative toppled radius after each particle
  std::string detail;
};

/// Adds N particles one at a time on the boxes background (shell_h on each
/// shell, interior_h elsewhere) and asserts after the k-th addition that
/// the cumulative toppled set stays inside Q_{r_k}.
BoxesOutcome robust_boxes_experiment(int d, const std::vector<std::int64_t>& shell_radii,
                                     Height interior_h, Height shell_h, int particles,
                                     const SchedulerSpec& scheduler = {},
                                     const Budget& budget = {});

struct ReductionReport {
  Count n = 0;
  int d = 0;
  double lambda = 0;
  std::int64_t rad = 0;          // cube radius of the d-dimensional pile
  Count best_m = 0;
  double match_fraction = 0;     // 1 - mismatches / annulus size at best_m
  Count mismatch_count = 0;
  Count annulus_size = 0;
  Count mass_estimate = 0;       // slice-mass bracket that seeded the search
  std::vector<std::pair<Count, double>> trace;  // (m, fraction) evaluations
};

/// Compares the x_d = 0 slice of the d-dimensional pile on Constant(2d-2)
/// with (d-1)-dimensional piles of m particles: a site matches exactly when
/// slice(x) == 2 + pile_{d-1}(x). Matching is scored on the annulus
/// lambda*rad < max|x_i| <= rad; the search starts from the slice-mass
/// bracket and hill-climbs on the match fraction within [m_min, m_max].
ReductionReport dimensional_reduction(Count n, int d, double lambda, Count m_min, Count m_max,
                                      const SchedulerSpec& scheduler = {},
                                      const Budget& budget = {}, int workers = 1);

}  // namespace spg
