#pragma once

#include "spg/analysis.hpp"
#include "spg/engine.hpp"
#include "spg/explosion.hpp"
#include "spg/leastaction.hpp"
#include "spg/profiles.hpp"

#include <json.hpp>

#include <string>

namespace spg {

inline nlohmann::json to_json(const Point& p) {
  nlohmann::json a = nlohmann::json::array();
  for (Eigen::Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

inline nlohmann::json to_json(const Box& b) {
  return {{"lo", to_json(b.lo)}, {"hi", to_json(b.hi)}};
}

inline nlohmann::json to_json(const IntegerProfile& f) {
  nlohmann::json values = nlohmann::json::array();
  for (std::int64_t x = f.support_min; x <= f.support_max; ++x) values.push_back(f.value(x));
  return {{"support_min", f.support_min}, {"support_max", f.support_max}, {"values", values}};
}

inline IntegerProfile profile_from_json(const nlohmann::json& j) {
  const std::int64_t lo = j.at("support_min").get<std::int64_t>();
  const std::int64_t hi = j.at("support_max").get<std::int64_t>();
  IntegerProfile f = IntegerProfile::over(lo, hi);
  const auto& values = j.at("values");
  if (static_cast<std::int64_t>(values.size()) != f.length())
    throw std::invalid_argument("profile values do not match the stated support");
  for (std::int64_t x = lo; x <= hi; ++x)
    f.ref(x) = values[static_cast<std::size_t>(x - lo)].get<std::int64_t>();
  return f;
}

/// Summary of a run, without the grids (those go to SPG1 dumps).
inline nlohmann::json to_json(const StabilizationResult& r) {
  return {{"status", to_string(r.status)},
          {"exhausted_reason", r.exhausted_reason},
          {"d", r.background.dim()},
          {"n", r.n},
          {"background", r.background.descriptor()},
          {"scheduler", r.scheduler.name()},
          {"radius", r.final.radius()},
          {"toppled_radius", r.toppled_radius},
          {"visited_radius", r.visited_radius},
          {"total_topplings", r.total_topplings},
          {"growth_count", r.growth_count},
          {"seconds", r.seconds}};
}

inline nlohmann::json to_json(const GrowthRecord& r) {
  return {{"d", r.d},
          {"background", r.background},
          {"n", r.n},
          {"radius_T", r.radius_T},
          {"radius_S", r.radius_S},
          {"is_exact_cube", r.is_exact_cube},
          {"bound_value", r.bound_value},
          {"scheduler", r.scheduler},
          {"seconds", r.seconds},
          {"total_topplings", r.total_topplings},
          {"status", to_string(r.status)}};
}

inline nlohmann::json to_json(const StageRecord& s) {
  return {{"direction", s.direction},
          {"face", to_json(s.face)},
          {"seed", to_json(s.seed)},
          {"topplings", s.topplings}};
}

inline nlohmann::json to_json(const ExplosionCertificate& c, bool full_stages = false) {
  nlohmann::json j = {{"initial_cube_radius", c.initial_cube_radius},
                      {"covered_radius", c.covered_radius},
                      {"legality_checked", c.legality_checked},
                      {"stage_count", c.stages.size()},
                      {"stage0_topplings", c.stage0_topplings},
                      {"total_topplings", c.total_topplings}};
  if (full_stages) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : c.stages) stages.push_back(to_json(s));
    j["stages"] = stages;
  }
  return j;
}

inline nlohmann::json to_json(const ExplosionOutcome& o, bool full_stages = false) {
  nlohmann::json j = {{"certified", o.certified},
                      {"certificate", to_json(o.certificate, full_stages)}};
  if (!o.certified) {
    j["failure_reason"] = o.failure_reason;
    j["failing_stage"] = o.failing_stage;
    if (o.failing_face) j["failing_face"] = to_json(*o.failing_face);
  }
  return j;
}

inline nlohmann::json to_json(const HypothesesReport& r) {
  nlohmann::json faces = nlohmann::json::array();
  for (const auto& f : r.failing_faces) faces.push_back({{"r", f.r}, {"direction", f.direction}});
  nlohmann::json j = {{"r_min", r.r_min},
                      {"r_max", r.r_max},
                      {"height_floor_ok", r.height_floor_ok},
                      {"below_floor_count", r.below_floor_count},
                      {"failing_faces", faces},
                      {"all_faces_pass", r.all_faces_pass()},
                      {"ok", r.ok()}};
  if (r.first_below_site) j["first_below_site"] = to_json(*r.first_below_site);
  if (r.faces_ok_from) j["faces_ok_from"] = *r.faces_ok_from;
  return j;
}

inline nlohmann::json to_json(const StabilizingCheck& c) {
  nlohmann::json j = {{"stabilizing", c.stabilizing}};
  if (c.witness) {
    j["witness"] = to_json(*c.witness);
    j["witness_height"] = c.witness_height;
  }
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

inline nlohmann::json to_json(const OdometerAgreement& a) {
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : a.runs) runs.push_back(to_json(r));
  nlohmann::json j = {{"equal", a.verdict == OdometerAgreement::Verdict::Equal},
                      {"indeterminate", a.verdict == OdometerAgreement::Verdict::Indeterminate},
                      {"over_budget", a.over_budget},
                      {"runs", runs}};
  if (a.first_discrepancy) {
    j["first_discrepancy"] = to_json(*a.first_discrepancy);
    j["discrepancy_values"] = a.discrepancy_values;
  }
  return j;
}

inline nlohmann::json to_json(const ReductionReport& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (const auto& [m, frac] : r.trace) trace.push_back({{"m", m}, {"fraction", frac}});
  return {{"n", r.n},
          {"d", r.d},
          {"lambda", r.lambda},
          {"rad", r.rad},
          {"best_m", r.best_m},
          {"match_fraction", r.match_fraction},
          {"mismatch_count", r.mismatch_count},
          {"annulus_size", r.annulus_size},
          {"mass_estimate", r.mass_estimate},
          {"trace", trace}};
}

inline nlohmann::json to_json(const BoxesOutcome& o) {
  nlohmann::json j = {{"ok", o.ok},
                      {"particles_added", o.particles_added},
                      {"toppled_radii", o.toppled_radii}};
  if (!o.ok) {
    j["violated_at"] = o.violated_at;
    j["violating_radius"] = o.violating_radius;
    j["detail"] = o.detail;
  }
  return j;
}

}  // namespace spg
