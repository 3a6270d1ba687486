#pragma once

#include "spg/grid.hpp"
#include "spg/types.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace spg {

/// Discrete Laplacian Du(x) = sum_{y~x} u(y) - 2d u(x), with u extended by
/// zero outside its window. The result lives on the same window; the mass
/// identity sum Du = 0 holds whenever the window pads the support of u by
/// at least one site.
template <typename Scalar>
GridField<Scalar> laplacian(const GridField<Scalar>& u) {
  const int d = u.dim();
  const std::int64_t side = u.side();
  GridField<Scalar> out(d, u.radius());
  out.array() = Scalar{-2 * d} * u.array();
  Scalar* o = out.data();
  const Scalar* in = u.data();
  for (int a = 0; a < d; ++a) {
    const Index s = u.stride(a);
    const Index block = s * side;  // one full period along axis a
    for (Index base = 0; base < u.size(); base += block) {
      // shifted adds within the axis-a run, clipped at the window edge
      for (Index i = base; i < base + block - s; ++i) {
        o[i] += in[i + s];
        o[i + s] += in[i];
      }
    }
  }
  return out;
}

/// One-dimensional Laplacian g(x+1) - 2g(x) + g(x-1) as a special case helper.
template <typename Scalar>
GridField<Scalar> laplacian_1d(const GridField<Scalar>& g) {
  static_assert(true);
  return laplacian(g);
}

/// Lattice boundary of a finite point set: neighbors of A not in A.
std::vector<Point> boundary(std::span<const Point> a);

/// Outer face of a box in direction psi_i (i in 1..2d): the sites one step
/// beyond the box. Returned as a box with the pushed axis pinned.
Box outer_face_box(const Box& box, int direction);

/// Outer face enumerated as a point set, flat order.
std::vector<Point> outer_face(const Box& box, int direction);

/// Exact integer determinant (Laplace expansion; dim <= kMaxDim).
std::int64_t det_int(const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& m);

/// Exact integer adjugate, adj(M) * M = det(M) * I.
Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> adjugate_int(
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& m);

/// Gamma at integer or half-integer arguments via the factorial / sqrt(pi)
/// recurrence, exact up to double rounding.
double gamma_half_integer(int twice_x);

/// Volume of the unit ball in R^d: pi^{d/2} / Gamma(d/2 + 1).
double unit_ball_volume(int d);

}  // namespace spg
