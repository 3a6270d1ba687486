#pragma once

#include "spg/background.hpp"
#include "spg/engine.hpp"
#include "spg/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spg {

/// One face stage of the staged toppling order: all sites of `face` topple
/// exactly once, starting from `seed` and fanning out by distance.
struct StageRecord {
  int direction = 0;  // 1..2d
  Box face;
  Point seed;
  Count topplings = 0;
};

struct ExplosionCertificate {
  std::int64_t initial_cube_radius = -1;  // stage-0 toppled cube Q_r
  std::vector<StageRecord> stages;
  std::int64_t covered_radius = -1;  // largest q with Q_q fully toppled
  bool legality_checked = false;
  Count stage0_topplings = 0;
  Count total_topplings = 0;
};

struct ExplosionOutcome {
  bool certified = false;
  ExplosionCertificate certificate;
  std::string failure_reason;
  std::optional<Box> failing_face;
  int failing_stage = -1;

  explicit operator bool() const { return certified; }
};

/// Runs the staged explosion procedure: stage 0 replays the topplings of
/// the stabilization of Constant(2d-2) + n particles (legal here because
/// the background dominates 2d-2 pointwise), then repeatedly topples the
/// outer faces of the grown box, cycling through the 2d directions, until
/// the box covers Q_target. Every face stage verifies its precondition
/// (all face sites at height >= 2d-1, at least one unstable) and every
/// toppling is checked legal. A failed precondition is returned as
/// evidence against explosivity at this scale.
ExplosionOutcome certify_explosion(const Background& background, Count n,
                                   std::int64_t target_radius, const Budget& budget = {});

struct FaceFailure {
  std::int64_t r = 0;
  int direction = 0;  // face F_direction(Q_r) holds no site of height >= 2d-1
};

struct HypothesesReport {
  std::int64_t r_min = 0;
  std::int64_t r_max = 0;
  // height floor: background >= 2d-2 everywhere on Q_{r_max+1}
  bool height_floor_ok = true;
  Count below_floor_count = 0;
  std::optional<Point> first_below_site;
  // face condition: every outer face of Q_r holds a site of height >= 2d-1
  std::vector<FaceFailure> failing_faces;
  // smallest r0 in [r_min, r_max] from which every scanned face passes;
  // empty when faces still fail at r_max
  std::optional<std::int64_t> faces_ok_from;

  bool all_faces_pass() const { return failing_faces.empty(); }
  bool ok() const { return height_floor_ok && faces_ok_from.has_value(); }
};

/// Scans the two explosivity hypotheses over r in [r_min, r_max]:
/// background >= 2d-2 on Q_{r_max+1}, and every outer face F_i(Q_r)
/// containing a site of height >= 2d-1.
HypothesesReport check_explosion_hypotheses(const Background& background, std::int64_t r_min,
                                            std::int64_t r_max);

}  // namespace spg
