#pragma once

#include "spg/background.hpp"
#include "spg/engine.hpp"
#include "spg/grid.hpp"
#include "spg/profiles.hpp"

#include <optional>
#include <string>

namespace spg {

struct StabilizingCheck {
  bool stabilizing = false;
  std::optional<Point> witness;  // a site where the induced height exceeds 2d-1
  Count witness_height = 0;
  std::string note;

  explicit operator bool() const { return stabilizing; }
};

/// Definition check for a finitely supported candidate: background + n at
/// the origin + laplacian(candidate) <= 2d-1 everywhere. The candidate must
/// be nonnegative and vanish on the outermost shell of its window (so the
/// window pads the support and the check is complete: outside the window
/// the Laplacian vanishes and the background is stable).
StabilizingCheck is_stabilizing(const Background& background, Count n, const Odometer& candidate);

/// Same check for a slab candidate u(x) = w(x) + g(x_axis), which is not
/// finitely supported. Inside a window covering w the condition is checked
/// site by site; outside, w and its Laplacian vanish, so the condition
/// reduces to max-height-on-hyperplane(axis, v) + laplacian(g)(v) <= 2d-1
/// for each coordinate value v, which is checked exactly per hyperplane.
StabilizingCheck is_stabilizing_slab(const Background& background, Count n, const Odometer& w,
                                     const IntegerProfile& g, int axis);

/// w(x) + g(max_i |x_i|): the pointwise minimum of the d slab candidates
/// when g is radially nonincreasing. Finitely supported.
Odometer envelope_candidate(const Odometer& w, const IntegerProfile& g);

/// Pointwise minimum on the union window.
Odometer pointwise_min(const Odometer& a, const Odometer& b);

/// Checks that min(u1, u2) is stabilizing, given that u1 and u2 are.
/// The closure lemma says this always holds; a negative answer is
/// reported with its witness (and means a bug somewhere).
struct TropicalCheck {
  StabilizingCheck u1;
  StabilizingCheck u2;
  StabilizingCheck min;
  bool ok() const { return u1.stabilizing && u2.stabilizing && min.stabilizing; }
};
TropicalCheck tropical_min_check(const Background& background, Count n, const Odometer& u1,
                                 const Odometer& u2);

/// Least action principle: any nonnegative stabilizing candidate dominates
/// the odometer pointwise. Runs the engine and compares.
struct LeastActionReport {
  StabilizingCheck candidate;      // is the candidate stabilizing at all
  bool engine_stable = false;      // engine run finished within budget
  bool dominates = false;          // candidate >= odometer everywhere
  std::optional<Point> witness;    // site with candidate < odometer
  Count odometer_value = 0;
  Count candidate_value = 0;
  StabilizationResult run;

  bool ok() const { return candidate.stabilizing && engine_stable && dominates; }
};
LeastActionReport least_action_check(const Background& background, Count n,
                                     const Odometer& candidate,
                                     const SchedulerSpec& scheduler = {},
                                     const Budget& budget = {});

/// Odometer of Constant(d-1) + n at the origin, memoized per (d, n): the
/// shared expensive ingredient of the slab candidates.
const Odometer& low_background_odometer(int d, Count n, const Budget& budget = {});

}  // namespace spg
