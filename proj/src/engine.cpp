#include "spg/engine.hpp"

#include "spg/lattice.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <limits>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <utility>

namespace spg {

const char* to_string(Status s) {
  switch (s) {
    case Status::Stable: return "stable";
    case Status::CertifiedExploding: return "certified-exploding";
    case Status::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

std::string SchedulerSpec::name() const {
  switch (kind) {
    case Kind::EnumerationOrder: return "enum";
    case Kind::ParallelSweep: return "parallel";
    case Kind::RandomOrder: return "random:" + std::to_string(seed);
    case Kind::NestedVolumes: return "nested";
  }
  return "?";
}

SchedulerSpec SchedulerSpec::parse(const std::string& text) {
  SchedulerSpec s;
  if (text == "enum" || text == "enumeration") {
    s.kind = Kind::EnumerationOrder;
  } else if (text == "parallel") {
    s.kind = Kind::ParallelSweep;
  } else if (text == "nested") {
    s.kind = Kind::NestedVolumes;
  } else if (text == "random" || text.rfind("random:", 0) == 0) {
    s.kind = Kind::RandomOrder;
    if (text.size() > 7) s.seed = std::stoull(text.substr(7));
  } else {
    throw std::invalid_argument("unknown scheduler '" + text +
                                "' (expected enum|parallel|random[:seed]|nested)");
  }
  return s;
}

std::vector<SchedulerSpec> SchedulerSpec::all(std::uint64_t random_seed) {
  SchedulerSpec e{SchedulerSpec::Kind::EnumerationOrder, 0};
  SchedulerSpec p{SchedulerSpec::Kind::ParallelSweep, 0};
  SchedulerSpec r{SchedulerSpec::Kind::RandomOrder, random_seed};
  SchedulerSpec v{SchedulerSpec::Kind::NestedVolumes, 0};
  return {e, p, r, v};
}

namespace {

// Largest window cell count the engine will allocate (~4 GB of run state).
constexpr Index kMaxCells = 250'000'000;

std::int64_t max_feasible_radius(int d, std::int64_t cap) {
  std::int64_t r = cap;
  auto cells = [&](std::int64_t radius) {
    Index n = 1;
    for (int a = 0; a < d; ++a) {
      if (n > kMaxCells / (2 * radius + 1)) return kMaxCells + 1;
      n *= 2 * radius + 1;
    }
    return n;
  };
  while (r > 0 && cells(r) > kMaxCells) r /= 2;
  return r;
}

class Sim {
 public:
  Sim(const Background& bg, const Budget& budget, std::int64_t initial_radius)
      : bg_(&bg), budget_(budget), d_(bg.dim()), twod_(2 * bg.dim()) {
    const std::int64_t r0 = std::min(std::max<std::int64_t>(initial_radius, 2),
                                     max_feasible_radius(d_, budget_.max_radius));
    heights_ = bg.window(r0);
    od_ = Odometer(d_, r0);
    refresh_geometry();
  }

  void add_at_origin(Count n) {
    if (n < 0) throw std::invalid_argument("particle count must be nonnegative");
    const Index o = heights_.index_of(origin(d_));
    const std::int64_t h = static_cast<std::int64_t>(heights_[o]) + n;
    if (h > std::numeric_limits<Height>::max())
      throw std::invalid_argument("particle count too large for 32-bit heights");
    heights_[o] = static_cast<Height>(h);
  }

  void load(const GridWindow& w) {
    if (w.dim() != d_) throw std::invalid_argument("window dimension mismatch");
    if (w.radius() > heights_.radius()) {
      heights_ = bg_->window(w.radius());
      od_ = Odometer(d_, w.radius());
      refresh_geometry();
    }
    heights_.paste(w);
  }

  Status run(const SchedulerSpec& s) {
    const auto t0 = std::chrono::steady_clock::now();
    Status st{};
    switch (s.kind) {
      case SchedulerSpec::Kind::ParallelSweep: st = run_parallel(); break;
      case SchedulerSpec::Kind::EnumerationOrder: st = run_enumeration(); break;
      case SchedulerSpec::Kind::RandomOrder: st = run_random(s.seed); break;
      case SchedulerSpec::Kind::NestedVolumes: st = run_nested(); break;
    }
    seconds_ = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return st;
  }

  StabilizationResult take_result(const Background& bg, Count n, const SchedulerSpec& sched,
                                  Status status) {
    StabilizationResult r;
    r.background = bg;
    r.n = n;
    r.scheduler = sched;
    r.status = status;
    r.exhausted_reason = reason_;
    r.total_topplings = total_;
    r.growth_count = growths_;
    r.seconds = seconds_;
    r.toppled_radius = od_.support_radius();
    r.visited_radius = r.toppled_radius < 0 ? -1 : r.toppled_radius + 1;
    r.final = std::move(heights_);
    r.odometer = std::move(od_);
    return r;
  }

 private:
  void refresh_geometry() {
    R_ = heights_.radius();
    size_ = heights_.size();
    for (int a = 0; a < d_; ++a) stride_[a] = heights_.stride(a);
    hp_ = heights_.data();
    odp_ = od_.data();
    shell_.assign(static_cast<std::size_t>(size_), 0);
    Index i = 0;
    for_each_point(d_, R_, [&](const Point& p) {
      shell_[static_cast<std::size_t>(i++)] = cube_norm(p) == R_;
    });
  }

  bool on_shell(Index i) const { return shell_[static_cast<std::size_t>(i)] != 0; }

  bool grow() {
    const std::int64_t cap = max_feasible_radius(d_, budget_.max_radius);
    const std::int64_t next = std::min(std::max(2 * R_, R_ + 16), cap);
    if (next <= R_) {
      reason_ = "radius";
      return false;
    }
    GridWindow nh = bg_->window(next);
    nh.paste(heights_);
    heights_ = std::move(nh);
    od_ = od_.grown(next);
    refresh_geometry();
    ++growths_;
    return true;
  }

  // One legal toppling at a non-shell site. The legality check is always on.
  inline void apply(Index i) {
    if (hp_[i] < twod_) throw std::logic_error("illegal toppling attempted");
    hp_[i] = static_cast<Height>(hp_[i] - twod_);
    ++odp_[i];
    ++total_;
  }

  bool over_budget() {
    if (total_ >= budget_.max_topplings) {
      reason_ = "topplings";
      return true;
    }
    return false;
  }

  // --- parallel sweep -------------------------------------------------

  template <int DFIX>
  Status run_parallel_impl() {
    const int d = DFIX == 0 ? d_ : DFIX;
    std::vector<Index> cur, nxt;
    bool need_grow = false;

    auto rescan = [&]() {
      cur.clear();
      need_grow = false;
      for (Index i = 0; i < size_; ++i) {
        if (hp_[i] >= twod_) {
          cur.push_back(i);
          if (on_shell(i)) need_grow = true;
        }
      }
    };

    rescan();
    while (!cur.empty()) {
      if (need_grow) {
        if (!grow()) return Status::BudgetExhausted;
        rescan();
        continue;
      }
      // Every site in cur was unstable at round start, so each single
      // toppling is legal. The next round's unstable set is collected on
      // the fly: a site enters nxt either when it stays unstable after
      // its own toppling, or when an increment lands it exactly at 2d
      // (heights move by +1, so the crossing is seen exactly once).
      nxt.clear();
      for (const Index i : cur) {
        apply(i);
        if (hp_[i] >= twod_) nxt.push_back(i);
        for (int a = 0; a < d; ++a) {
          const Index s = stride_[a];
          if (++hp_[i + s] == twod_) {
            nxt.push_back(i + s);
            if (on_shell(i + s)) need_grow = true;
          }
          if (++hp_[i - s] == twod_) {
            nxt.push_back(i - s);
            if (on_shell(i - s)) need_grow = true;
          }
        }
      }
      if (over_budget()) return Status::BudgetExhausted;
      cur.swap(nxt);
    }
    return Status::Stable;
  }

  Status run_parallel() {
    switch (d_) {
      case 1: return run_parallel_impl<1>();
      case 2: return run_parallel_impl<2>();
      case 3: return run_parallel_impl<3>();
      default: return run_parallel_impl<0>();
    }
  }

  // --- enumeration order ----------------------------------------------

  Status run_enumeration() {
    // Sites keyed by (|x|^2, flat index); flat order is lexicographic on
    // coordinates, so this is the distance-then-lex enumeration.
    std::set<std::pair<std::int64_t, Index>> unstable;
    auto rescan = [&]() {
      unstable.clear();
      Index i = 0;
      for_each_point(d_, R_, [&](const Point& p) {
        if (hp_[i] >= twod_) unstable.insert({norm2(p), i});
        ++i;
      });
    };
    rescan();
    while (!unstable.empty()) {
      const auto it = unstable.begin();
      const Index i = it->second;
      if (on_shell(i)) {
        if (!grow()) return Status::BudgetExhausted;
        rescan();
        continue;
      }
      apply(i);
      const Point p = heights_.point_of(i);
      const std::int64_t n2 = norm2(p);
      for (int a = 0; a < d_; ++a) {
        const Index s = stride_[a];
        if (++hp_[i + s] >= twod_) unstable.insert({n2 + 2 * p[a] + 1, i + s});
        if (++hp_[i - s] >= twod_) unstable.insert({n2 - 2 * p[a] + 1, i - s});
      }
      if (hp_[i] < twod_) unstable.erase(it);
      if (over_budget()) return Status::BudgetExhausted;
    }
    return Status::Stable;
  }

  // --- random order ----------------------------------------------------

  Status run_random(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<Index> list;
    std::vector<Index> pos;
    auto rescan = [&]() {
      list.clear();
      pos.assign(static_cast<std::size_t>(size_), -1);
      for (Index i = 0; i < size_; ++i) {
        if (hp_[i] >= twod_) {
          pos[static_cast<std::size_t>(i)] = static_cast<Index>(list.size());
          list.push_back(i);
        }
      }
    };
    auto push = [&](Index j) {
      auto& pj = pos[static_cast<std::size_t>(j)];
      if (pj < 0 && hp_[j] >= twod_) {
        pj = static_cast<Index>(list.size());
        list.push_back(j);
      }
    };
    auto remove_at = [&](std::size_t k) {
      pos[static_cast<std::size_t>(list[k])] = -1;
      list[k] = list.back();
      pos[static_cast<std::size_t>(list[k])] = static_cast<Index>(k);
      list.pop_back();
    };
    rescan();
    while (!list.empty()) {
      std::uniform_int_distribution<std::size_t> pick(0, list.size() - 1);
      const std::size_t k = pick(rng);
      const Index i = list[k];
      if (on_shell(i)) {
        if (!grow()) return Status::BudgetExhausted;
        rescan();
        continue;
      }
      apply(i);
      for (int a = 0; a < d_; ++a) {
        const Index s = stride_[a];
        ++hp_[i + s];
        ++hp_[i - s];
        push(i + s);
        push(i - s);
      }
      if (hp_[i] < twod_) remove_at(k);
      if (over_budget()) return Status::BudgetExhausted;
    }
    return Status::Stable;
  }

  // --- nested volumes --------------------------------------------------

  Status run_nested() {
    // Stabilize Q_k completely before enlarging k. Sites that turn
    // unstable one step beyond the current volume wait in `deferred`.
    std::vector<Index> queue, deferred;
    std::vector<std::uint8_t> queued;
    std::vector<std::int64_t> norm;  // cube norm per site, rebuilt on growth
    std::int64_t k = 1;

    auto rescan = [&]() {
      queue.clear();
      deferred.clear();
      queued.assign(static_cast<std::size_t>(size_), 0);
      norm.assign(static_cast<std::size_t>(size_), 0);
      Index i = 0;
      for_each_point(d_, R_, [&](const Point& p) {
        norm[static_cast<std::size_t>(i)] = cube_norm(p);
        ++i;
      });
      for (Index j = 0; j < size_; ++j) {
        if (hp_[j] >= twod_) {
          k = std::max(k, norm[static_cast<std::size_t>(j)]);
          queued[static_cast<std::size_t>(j)] = 1;
          queue.push_back(j);
        }
      }
    };

    rescan();
    for (std::size_t head = 0;;) {
      if (head == queue.size()) {
        queue.clear();
        head = 0;
        if (deferred.empty()) return Status::Stable;
        ++k;
        queue.swap(deferred);
        continue;
      }
      const Index i = queue[head++];
      queued[static_cast<std::size_t>(i)] = 0;
      if (hp_[i] < twod_) continue;
      if (on_shell(i)) {
        if (!grow()) return Status::BudgetExhausted;
        rescan();
        head = 0;
        continue;
      }
      apply(i);
      auto offer = [&](Index j) {
        auto& q = queued[static_cast<std::size_t>(j)];
        if (!q && hp_[j] >= twod_) {
          q = 1;
          if (norm[static_cast<std::size_t>(j)] <= k)
            queue.push_back(j);
          else
            deferred.push_back(j);
        }
      };
      for (int a = 0; a < d_; ++a) {
        const Index s = stride_[a];
        ++hp_[i + s];
        ++hp_[i - s];
        offer(i + s);
        offer(i - s);
      }
      offer(i);  // may still be unstable
      if (over_budget()) return Status::BudgetExhausted;
    }
  }

  const Background* bg_;
  Budget budget_;
  int d_;
  int twod_;
  std::int64_t R_ = 0;
  Index size_ = 0;
  std::array<Index, kMaxDim> stride_{};
  GridWindow heights_;
  Odometer od_;
  Height* hp_ = nullptr;
  Count* odp_ = nullptr;
  std::vector<std::uint8_t> shell_;
  Count total_ = 0;
  int growths_ = 0;
  double seconds_ = 0.0;
  std::string reason_;
};

}  // namespace

StabilizationResult stabilize(const Background& background, Count n,
                              const SchedulerSpec& scheduler, const Budget& budget) {
  Sim sim(background, budget, 8);
  sim.add_at_origin(n);
  const Status st = sim.run(scheduler);
  return sim.take_result(background, n, scheduler, st);
}

StabilizationResult add_and_stabilize(const StabilizationResult& prev, Count extra,
                                      const SchedulerSpec& scheduler, const Budget& budget) {
  if (prev.status != Status::Stable)
    throw std::invalid_argument("add_and_stabilize requires a Stable result");
  if (extra < 0) throw std::invalid_argument("particle count must be nonnegative");
  Sim sim(prev.background, budget, prev.final.radius());
  sim.load(prev.final);
  sim.add_at_origin(extra);
  const Status st = sim.run(scheduler);
  StabilizationResult r = sim.take_result(prev.background, prev.n + extra, scheduler, st);
  // fold in the history: cumulative odometer equals a fresh (n+extra) run
  r.odometer.paste_add(prev.odometer);
  r.total_topplings += prev.total_topplings;
  r.toppled_radius = r.odometer.support_radius();
  r.visited_radius = r.toppled_radius < 0 ? -1 : r.toppled_radius + 1;
  return r;
}

OdometerAgreement odometer_agreement(const Background& background, Count n,
                                     const std::vector<SchedulerSpec>& schedulers,
                                     const Budget& budget, int workers) {
  OdometerAgreement out;
  out.runs.resize(schedulers.size());
  const int nw = std::max(1, std::min<int>(workers, static_cast<int>(schedulers.size())));
  if (nw <= 1) {
    for (std::size_t i = 0; i < schedulers.size(); ++i)
      out.runs[i] = stabilize(background, n, schedulers[i], budget);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < nw; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= schedulers.size()) return;
          out.runs[i] = stabilize(background, n, schedulers[i], budget);
        }
      });
    }
    for (auto& t : pool) t.join();
  }

  for (const auto& r : out.runs)
    if (r.status != Status::Stable) out.over_budget.push_back(r.scheduler.name());
  if (!out.over_budget.empty()) {
    out.verdict = OdometerAgreement::Verdict::Indeterminate;
    return out;
  }

  std::int64_t rmax = 0;
  for (const auto& r : out.runs) rmax = std::max(rmax, r.odometer.radius());
  out.verdict = OdometerAgreement::Verdict::Equal;
  for_each_point(background.dim(), rmax, [&](const Point& p) {
    if (out.first_discrepancy) return;
    const Count v0 = out.runs[0].odometer.value_or_zero(p);
    for (std::size_t s = 1; s < out.runs.size(); ++s) {
      if (out.runs[s].odometer.value_or_zero(p) != v0) {
        out.verdict = OdometerAgreement::Verdict::Unequal;
        out.first_discrepancy = p;
        for (const auto& r : out.runs)
          out.discrepancy_values.push_back(r.odometer.value_or_zero(p));
        return;
      }
    }
  });
  return out;
}

GridWindow initial_window(const StabilizationResult& result) {
  GridWindow w = result.background.window(result.final.radius());
  const std::int64_t h =
      static_cast<std::int64_t>(w.at(origin(w.dim()))) + result.n;
  w.at(origin(w.dim())) = static_cast<Height>(h);
  return w;
}

bool laplacian_identity_holds(const GridWindow& initial, const GridWindow& final,
                              const Odometer& odometer) {
  if (initial.radius() != final.radius() || final.radius() != odometer.radius())
    throw std::invalid_argument("laplacian_identity_holds: window mismatch");
  const Odometer lap = laplacian(odometer);
  for (Index i = 0; i < final.size(); ++i) {
    if (static_cast<Count>(final[i]) != static_cast<Count>(initial[i]) + lap[i]) return false;
  }
  return true;
}

}  // namespace spg
