#pragma once

#include "spg/background.hpp"
#include "spg/grid.hpp"
#include "spg/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spg {

/// Run limits. Exhausting a budget is a result, not an error.
struct Budget {
  Count max_topplings = 10'000'000'000LL;
  std::int64_t max_radius = 4096;
};

enum class Status { Stable, CertifiedExploding, BudgetExhausted };

const char* to_string(Status s);

/// Legal toppling orders. All of them only ever topple sites holding at
/// least 2d particles, so by the abelian property they produce identical
/// odometers whenever they terminate.
struct SchedulerSpec {
  enum class Kind {
    EnumerationOrder,  // smallest unstable site by (|x|^2, lex) topples
    ParallelSweep,     // two-phase rounds: collect unstable set, topple each once
    RandomOrder,       // uniformly random unstable site per step
    NestedVolumes      // stabilize Q_1, then Q_2, ...
  };
  Kind kind = Kind::ParallelSweep;
  std::uint64_t seed = 0;  // RandomOrder only

  std::string name() const;
  /// Parses "enum" | "parallel" | "random[:seed]" | "nested".
  static SchedulerSpec parse(const std::string& text);
  static std::vector<SchedulerSpec> all(std::uint64_t random_seed = 1);
};

struct StabilizationResult {
  Background background = Background::constant(1, 0);
  Count n = 0;
  SchedulerSpec scheduler;

  GridWindow final;    // heights over the final window
  Odometer odometer;   // per-site toppling counts, same window
  Status status = Status::Stable;
  std::string exhausted_reason;  // "topplings" or "radius" when over budget

  std::int64_t toppled_radius = -1;  // cube radius of the odometer support
  std::int64_t visited_radius = -1;  // cube radius of support + its boundary
  Count total_topplings = 0;
  int growth_count = 0;
  double seconds = 0.0;

  bool stable() const { return status == Status::Stable; }
};

/// Stabilizes background + n particles at the origin under the given
/// scheduler. The window starts small and grows (radius -> max(2R, R+16))
/// whenever a site on the outermost shell topples or becomes unstable, so
/// a Stable result always has zero odometer on its shell.
StabilizationResult stabilize(const Background& background, Count n,
                              const SchedulerSpec& scheduler = {}, const Budget& budget = {});

/// Continues a Stable result with `extra` more particles at the origin.
/// The returned odometer is cumulative: by the abelian property it equals
/// the odometer of a fresh run with n + extra particles.
StabilizationResult add_and_stabilize(const StabilizationResult& prev, Count extra,
                                      const SchedulerSpec& scheduler = {},
                                      const Budget& budget = {});

struct OdometerAgreement {
  enum class Verdict { Equal, Unequal, Indeterminate };
  Verdict verdict = Verdict::Equal;
  std::optional<Point> first_discrepancy;
  std::vector<Count> discrepancy_values;      // one per scheduler, at the site
  std::vector<std::string> over_budget;       // schedulers that did not finish
  std::vector<StabilizationResult> runs;

  bool equal() const { return verdict == Verdict::Equal; }
};

/// Runs every scheduler on (background, n) and compares odometers
/// site-for-site. Any over-budget run makes the verdict Indeterminate.
OdometerAgreement odometer_agreement(const Background& background, Count n,
                                     const std::vector<SchedulerSpec>& schedulers,
                                     const Budget& budget = {}, int workers = 1);

/// final == initial + laplacian(odometer), checked exactly.
bool laplacian_identity_holds(const GridWindow& initial, const GridWindow& final,
                              const Odometer& odometer);

/// Reconstructs the starting configuration of a run on its final window:
/// the background plus n particles at the origin.
GridWindow initial_window(const StabilizationResult& result);

}  // namespace spg
