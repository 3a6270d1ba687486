#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace spg {

/// Heights are 32-bit signed: intermediate configurations may go negative
/// (holes, constructed stabilizing functions) and staged explosions need
/// more headroom than 16 bits would give.
using Height = std::int32_t;

/// Toppling counts and particle numbers.
using Count = std::int64_t;

/// Flat index into a dense window.
using Index = std::int64_t;

/// Hard cap on the lattice dimension; keeps Point allocation-free.
inline constexpr int kMaxDim = 8;

/// A lattice site in Z^d. Fixed-capacity Eigen array, no heap.
using Point = Eigen::Array<std::int64_t, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

inline Point make_point(std::initializer_list<std::int64_t> coords) {
  Point p(static_cast<Eigen::Index>(coords.size()));
  Eigen::Index i = 0;
  for (auto c : coords) p[i++] = c;
  return p;
}

inline Point origin(int dim) { return Point::Zero(dim); }

/// Squared Euclidean norm |x|^2.
inline std::int64_t norm2(const Point& p) { return (p * p).sum(); }

/// Cube norm max|x_i|.
inline std::int64_t cube_norm(const Point& p) { return p.abs().maxCoeff(); }

inline bool lex_less(const Point& a, const Point& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

inline bool point_eq(const Point& a, const Point& b) {
  return a.size() == b.size() && (a == b).all();
}

struct PointLess {
  bool operator()(const Point& a, const Point& b) const { return lex_less(a, b); }
};

/// Axis-aligned box [lo_1,hi_1] x ... x [lo_d,hi_d], bounds inclusive.
struct Box {
  Point lo;
  Point hi;

  int dim() const { return static_cast<int>(lo.size()); }

  static Box cube(int dim, std::int64_t radius) {
    Box b;
    b.lo = Point::Constant(dim, -radius);
    b.hi = Point::Constant(dim, radius);
    return b;
  }

  bool contains(const Point& p) const {
    return (p >= lo).all() && (p <= hi).all();
  }

  bool contains(const Box& other) const {
    return (other.lo >= lo).all() && (other.hi <= hi).all();
  }

  std::int64_t volume() const {
    std::int64_t v = 1;
    for (Eigen::Index i = 0; i < lo.size(); ++i) v *= hi[i] - lo[i] + 1;
    return v;
  }

  /// Largest q with Q_q contained in this box (-1 if none).
  std::int64_t inscribed_cube_radius() const {
    return std::min((-lo).minCoeff(), hi.minCoeff());
  }
};

/// The 2d coordinate directions: 1..d are +e_1..+e_d, d+1..2d are -e_1..-e_d.
inline Point direction_vector(int dim, int direction) {
  if (direction < 1 || direction > 2 * dim)
    throw std::out_of_range("direction index must be in 1..2d, got " + std::to_string(direction));
  Point p = Point::Zero(dim);
  if (direction <= dim)
    p[direction - 1] = 1;
  else
    p[direction - dim - 1] = -1;
  return p;
}

inline std::string to_string(const Point& p) {
  std::string s = "(";
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

}  // namespace spg
