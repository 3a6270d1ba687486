#include "spg/lattice.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace spg {

std::vector<Point> boundary(std::span<const Point> a) {
  std::set<Point, PointLess> in(a.begin(), a.end());
  std::set<Point, PointLess> out;
  for (const Point& p : a) {
    const int d = static_cast<int>(p.size());
    for (int dir = 1; dir <= 2 * d; ++dir) {
      Point q = p + direction_vector(d, dir);
      if (!in.count(q)) out.insert(q);
    }
  }
  return {out.begin(), out.end()};
}

Box outer_face_box(const Box& box, int direction) {
  const int d = box.dim();
  if (direction < 1 || direction > 2 * d)
    throw std::out_of_range("face direction must be in 1..2d");
  Box f = box;
  if (direction <= d) {
    const int a = direction - 1;
    f.lo[a] = f.hi[a] = box.hi[a] + 1;
  } else {
    const int a = direction - d - 1;
    f.lo[a] = f.hi[a] = box.lo[a] - 1;
  }
  return f;
}

std::vector<Point> outer_face(const Box& box, int direction) {
  const Box f = outer_face_box(box, direction);
  std::vector<Point> pts;
  pts.reserve(static_cast<std::size_t>(f.volume()));
  for_each_point(f, [&](const Point& p) { pts.push_back(p); });
  return pts;
}

namespace {

using IMat = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

IMat minor_of(const IMat& m, int row, int col) {
  const int n = static_cast<int>(m.rows());
  IMat out(n - 1, n - 1);
  for (int i = 0, oi = 0; i < n; ++i) {
    if (i == row) continue;
    for (int j = 0, oj = 0; j < n; ++j) {
      if (j == col) continue;
      out(oi, oj++) = m(i, j);
    }
    ++oi;
  }
  return out;
}

}  // namespace

std::int64_t det_int(const IMat& m) {
  const int n = static_cast<int>(m.rows());
  if (n != m.cols()) throw std::invalid_argument("det_int: matrix must be square");
  if (n > kMaxDim) throw std::invalid_argument("det_int: dimension too large");
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  std::int64_t det = 0;
  for (int j = 0; j < n; ++j) {
    if (m(0, j) == 0) continue;
    const std::int64_t cof = det_int(minor_of(m, 0, j));
    det += (j % 2 == 0 ? 1 : -1) * m(0, j) * cof;
  }
  return det;
}

IMat adjugate_int(const IMat& m) {
  const int n = static_cast<int>(m.rows());
  if (n != m.cols()) throw std::invalid_argument("adjugate_int: matrix must be square");
  IMat adj(n, n);
  if (n == 1) {
    adj(0, 0) = 1;
    return adj;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::int64_t cof = det_int(minor_of(m, i, j));
      adj(j, i) = ((i + j) % 2 == 0 ? 1 : -1) * cof;  // transpose of cofactors
    }
  }
  return adj;
}

double gamma_half_integer(int twice_x) {
  if (twice_x <= 0) throw std::invalid_argument("gamma_half_integer: argument must be positive");
  if (twice_x % 2 == 0) {
    double g = 1.0;  // Gamma(k) = (k-1)!
    for (int k = 2; k < twice_x / 2; ++k) g *= k;
    return g;
  }
  double g = std::sqrt(M_PI);  // Gamma(1/2)
  for (int t = 1; t < twice_x; t += 2) g *= t / 2.0;
  return g;
}

double unit_ball_volume(int d) {
  if (d < 1) throw std::invalid_argument("unit_ball_volume: d must be >= 1");
  return std::pow(M_PI, d / 2.0) / gamma_half_integer(d + 2);
}

}  // namespace spg
