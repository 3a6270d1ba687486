#include "spg/leastaction.hpp"

#include "spg/lattice.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace spg {

namespace {

void require_padded(const Odometer& u, const char* what) {
  if ((u.array() < 0).any())
    throw std::invalid_argument(std::string(what) + ": candidate must be nonnegative");
  const std::int64_t s = u.support_radius();
  if (s >= 0 && s >= u.radius())
    throw std::invalid_argument(std::string(what) +
                                ": window does not pad the candidate support");
}

}  // namespace

StabilizingCheck is_stabilizing(const Background& background, Count n,
                                const Odometer& candidate) {
  if (candidate.dim() != background.dim())
    throw std::invalid_argument("is_stabilizing: dimension mismatch");
  require_padded(candidate, "is_stabilizing");
  const int d = background.dim();
  const Count top = 2 * d - 1;
  const Odometer lap = laplacian(candidate);

  StabilizingCheck out;
  out.stabilizing = true;
  Index i = 0;
  for_each_point(d, candidate.radius(), [&](const Point& p) {
    if (!out.stabilizing) {
      ++i;
      return;
    }
    Count v = background(p) + lap[i];
    if ((p == 0).all()) v += n;
    if (v > top) {
      out.stabilizing = false;
      out.witness = p;
      out.witness_height = v;
    }
    ++i;
  });
  return out;
}

StabilizingCheck is_stabilizing_slab(const Background& background, Count n, const Odometer& w,
                                     const IntegerProfile& g, int axis) {
  const int d = background.dim();
  if (axis < 1 || axis > d) throw std::invalid_argument("slab axis must be in 1..d");
  if (w.dim() != d) throw std::invalid_argument("is_stabilizing_slab: dimension mismatch");
  require_padded(w, "is_stabilizing_slab");
  if (!g.nonnegative())
    throw std::invalid_argument("is_stabilizing_slab: profile must be nonnegative");
  const Count top = 2 * d - 1;
  const IntegerProfile f = profile_laplacian(g);

  StabilizingCheck out;
  out.stabilizing = true;

  // inside the w window: full condition, site by site
  const Odometer lap = laplacian(w);
  Index i = 0;
  for_each_point(d, w.radius(), [&](const Point& p) {
    if (!out.stabilizing) {
      ++i;
      return;
    }
    Count v = background(p) + lap[i] + f.value(p[axis - 1]);
    if ((p == 0).all()) v += n;
    if (v > top) {
      out.stabilizing = false;
      out.witness = p;
      out.witness_height = v;
      out.note = "violation inside the window";
    }
    ++i;
  });
  if (!out.stabilizing) return out;

  // outside the window w and its Laplacian vanish, so per hyperplane
  // {x_axis = v} the induced height is at most the background maximum
  // there plus f(v); this bound is attained for the repeating backgrounds
  for (std::int64_t v = f.support_min; v <= f.support_max; ++v) {
    const Count m = background.max_height_on_hyperplane(axis, v) + f.value(v);
    if (m > top) {
      out.stabilizing = false;
      out.witness_height = m;
      out.note = "hyperplane x_" + std::to_string(axis) + " = " + std::to_string(v) +
                 " outside the window can reach height " + std::to_string(m);
      return out;
    }
  }
  return out;
}

Odometer envelope_candidate(const Odometer& w, const IntegerProfile& g) {
  if (!g.nonnegative())
    throw std::invalid_argument("envelope_candidate: profile must be nonnegative");
  const std::int64_t g_ext =
      g.empty() ? 0 : std::max(std::abs(g.support_min), std::abs(g.support_max));
  const std::int64_t radius = std::max(w.radius(), g_ext + 1);
  Odometer u(w.dim(), radius);
  Index i = 0;
  for_each_point(w.dim(), radius, [&](const Point& p) {
    u[i++] = w.value_or_zero(p) + g.value(cube_norm(p));
  });
  return u;
}

Odometer pointwise_min(const Odometer& a, const Odometer& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("pointwise_min: dimension mismatch");
  const std::int64_t radius = std::max(a.radius(), b.radius());
  Odometer out(a.dim(), radius);
  Index i = 0;
  for_each_point(a.dim(), radius, [&](const Point& p) {
    out[i++] = std::min(a.value_or_zero(p), b.value_or_zero(p));
  });
  return out;
}

TropicalCheck tropical_min_check(const Background& background, Count n, const Odometer& u1,
                                 const Odometer& u2) {
  TropicalCheck out;
  out.u1 = is_stabilizing(background, n, u1);
  out.u2 = is_stabilizing(background, n, u2);
  if (!out.u1.stabilizing || !out.u2.stabilizing) {
    out.min.note = "preconditions unmet: both inputs must be stabilizing";
    return out;
  }
  out.min = is_stabilizing(background, n, pointwise_min(u1, u2));
  return out;
}

LeastActionReport least_action_check(const Background& background, Count n,
                                     const Odometer& candidate, const SchedulerSpec& scheduler,
                                     const Budget& budget) {
  LeastActionReport rep;
  rep.candidate = is_stabilizing(background, n, candidate);
  rep.run = stabilize(background, n, scheduler, budget);
  rep.engine_stable = rep.run.status == Status::Stable;
  if (!rep.engine_stable) return rep;

  rep.dominates = true;
  const std::int64_t radius = std::max(candidate.radius(), rep.run.odometer.radius());
  for_each_point(background.dim(), radius, [&](const Point& p) {
    if (!rep.dominates) return;
    const Count u = rep.run.odometer.value_or_zero(p);
    const Count c = candidate.value_or_zero(p);
    if (c < u) {
      rep.dominates = false;
      rep.witness = p;
      rep.odometer_value = u;
      rep.candidate_value = c;
    }
  });
  return rep;
}

const Odometer& low_background_odometer(int d, Count n, const Budget& budget) {
  static std::mutex mu;
  static std::map<std::pair<int, Count>, std::unique_ptr<Odometer>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{d, n}];
  if (!slot) {
    StabilizationResult res =
        stabilize(Background::constant(d, static_cast<Height>(d - 1)), n, SchedulerSpec{}, budget);
    if (res.status != Status::Stable)
      throw std::runtime_error("low_background_odometer: run exhausted its budget");
    slot = std::make_unique<Odometer>(std::move(res.odometer));
  }
  return *slot;
}

}  // namespace spg
