#pragma once

#include "spg/grid.hpp"
#include "spg/types.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace spg {

/// An initial stable height rule on all of Z^d. Evaluation is a pure
/// function of the site (and the seed, for the Bernoulli family), so
/// windows can grow without storing history.
class Background {
 public:
  enum class Kind { Constant, LambdaAugmented, LatticeAugmented, BernoulliAugmented, Boxes };

  using GeneratorMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

  /// Constant height h everywhere; h may be negative (holes).
  static Background constant(int dim, Height h);

  /// h+1 on sites with no coordinate divisible by m, h elsewhere.
  static Background lambda_augmented(int dim, Height h, std::int64_t m);

  /// h+1 on the sublattice spanned by the columns of `generators`,
  /// h elsewhere. Requires a nonsingular matrix whose rows each have
  /// gcd 1 (so the sublattice meets every coordinate hyperplane).
  static Background lattice_augmented(int dim, Height h, GeneratorMatrix generators);

  /// h+1 independently with probability eps, decided by a seeded
  /// counter-based hash of the coordinates.
  static Background bernoulli_augmented(int dim, Height h, double eps, std::uint64_t seed);

  /// shell_h on each boundary shell of Q_{r_i}, interior_h elsewhere.
  static Background boxes(int dim, Height interior_h, Height shell_h,
                          std::vector<std::int64_t> shell_radii);

  Height operator()(const Point& x) const;

  /// Fills a window with background values.
  GridWindow window(std::int64_t radius) const;

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  Height base_height() const { return h_; }
  /// Largest height the rule can produce.
  Height max_height() const;
  /// Smallest height the rule can produce.
  Height min_height() const;

  std::int64_t modulus() const { return m_; }
  double epsilon() const { return eps_; }
  std::uint64_t seed() const { return seed_; }
  const GeneratorMatrix& generators() const { return gens_; }
  std::int64_t lattice_determinant() const { return det_; }
  Height shell_height() const { return shell_h_; }
  const std::vector<std::int64_t>& shell_radii() const { return shell_radii_; }

  /// True iff x lies in the generated sublattice (LatticeAugmented only).
  bool in_lattice(const Point& x) const;

  /// Largest height the rule attains anywhere on the hyperplane
  /// {x : x_axis = value} (axis 1-based). Exact for every kind; for the
  /// Bernoulli family it is the almost-sure supremum.
  Height max_height_on_hyperplane(int axis, std::int64_t value) const;

  /// Colon-delimited descriptor, e.g. "lambda:2:5"; round-trips via parse().
  std::string descriptor() const;
  static Background parse(int dim, const std::string& descriptor);

  /// Same-seed Bernoulli variant with a different seed (retry support).
  Background with_seed(std::uint64_t seed) const;

 private:
  Background() = default;
  void validate_stable() const;

  Kind kind_ = Kind::Constant;
  int dim_ = 0;
  Height h_ = 0;
  std::int64_t m_ = 1;
  double eps_ = 0;
  std::uint64_t seed_ = 0;
  GeneratorMatrix gens_;
  GeneratorMatrix adj_;   // adjugate of gens_, for exact membership
  std::int64_t det_ = 0;  // det of gens_
  Height shell_h_ = 0;
  std::vector<std::int64_t> shell_radii_;
};

/// Counter-based hash of (seed, coords) mapped to [0,1).
double site_uniform(std::uint64_t seed, const Point& x);

}  // namespace spg
