#pragma once

#include "spg/types.hpp"

#include <Eigen/Core>

#include <array>
#include <stdexcept>

namespace spg {

/// Dense field on the centered cube Q_R of Z^d. Values are stored flat,
/// row-major with the last axis fastest, so the flat order is also the
/// lexicographic order on coordinates.
template <typename Scalar>
class GridField {
 public:
  using Array = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

  GridField() = default;

  GridField(int dim, std::int64_t radius, Scalar fill = Scalar{0})
      : dim_(dim), radius_(radius) {
    if (dim < 1 || dim > kMaxDim)
      throw std::invalid_argument("grid dimension must be in 1.." + std::to_string(kMaxDim));
    if (radius < 0) throw std::invalid_argument("grid radius must be nonnegative");
    side_ = 2 * radius + 1;
    Index n = 1;
    for (int a = dim - 1; a >= 0; --a) {
      stride_[a] = n;
      if (n > (std::int64_t{1} << 40) / side_)
        throw std::length_error("grid too large to address");
      n *= side_;
    }
    data_ = Array::Constant(n, fill);
  }

  int dim() const { return dim_; }
  std::int64_t radius() const { return radius_; }
  std::int64_t side() const { return side_; }
  Index size() const { return data_.size(); }
  Index stride(int axis) const { return stride_[axis]; }

  Array& array() { return data_; }
  const Array& array() const { return data_; }
  Scalar* data() { return data_.data(); }
  const Scalar* data() const { return data_.data(); }

  Scalar operator[](Index i) const { return data_[i]; }
  Scalar& operator[](Index i) { return data_[i]; }

  bool contains(const Point& p) const { return cube_norm(p) <= radius_; }

  Index index_of(const Point& p) const {
    Index i = 0;
    for (int a = 0; a < dim_; ++a) i += (p[a] + radius_) * stride_[a];
    return i;
  }

  Point point_of(Index i) const {
    Point p(dim_);
    for (int a = 0; a < dim_; ++a) {
      p[a] = i / stride_[a] - radius_;
      i %= stride_[a];
    }
    return p;
  }

  Scalar at(const Point& p) const { return data_[index_of(p)]; }
  Scalar& at(const Point& p) { return data_[index_of(p)]; }

  /// Value with the field extended by zero outside its window.
  Scalar value_or_zero(const Point& p) const {
    return contains(p) ? data_[index_of(p)] : Scalar{0};
  }

  /// Cube radius of the support {x : f(x) != 0}; -1 for an all-zero field.
  std::int64_t support_radius() const {
    std::int64_t r = -1;
    for (Index i = 0; i < size(); ++i) {
      if (data_[i] != Scalar{0}) r = std::max(r, cube_norm(point_of(i)));
    }
    return r;
  }

  /// Copies this field into a larger window; new sites get `fill`.
  GridField grown(std::int64_t new_radius, Scalar fill = Scalar{0}) const {
    if (new_radius < radius_) throw std::invalid_argument("grown: radius must not shrink");
    GridField out(dim_, new_radius, fill);
    out.paste(*this);
    return out;
  }

  /// Overwrites the overlap of this window with `src` values.
  void paste(const GridField& src) {
    if (src.dim_ != dim_) throw std::invalid_argument("paste: dimension mismatch");
    const std::int64_t r = std::min(radius_, src.radius_);
    Point p = Point::Constant(dim_, -r);
    for (;;) {
      at(p) = src.at(p);
      int a = dim_ - 1;
      while (a >= 0 && p[a] == r) p[a--] = -r;
      if (a < 0) break;
      ++p[a];
    }
  }

  /// Adds `src` values into the overlap of this window.
  void paste_add(const GridField& src) {
    if (src.dim_ != dim_) throw std::invalid_argument("paste_add: dimension mismatch");
    const std::int64_t r = std::min(radius_, src.radius_);
    Point p = Point::Constant(dim_, -r);
    for (;;) {
      at(p) += src.at(p);
      int a = dim_ - 1;
      while (a >= 0 && p[a] == r) p[a--] = -r;
      if (a < 0) break;
      ++p[a];
    }
  }

  bool operator==(const GridField& o) const {
    return dim_ == o.dim_ && radius_ == o.radius_ && (data_ == o.data_).all();
  }
  bool operator!=(const GridField& o) const { return !(*this == o); }

 private:
  int dim_ = 0;
  std::int64_t radius_ = -1;
  std::int64_t side_ = 0;
  std::array<Index, kMaxDim> stride_{};
  Array data_;
};

/// Height configuration on a window.
using GridWindow = GridField<Height>;

/// Per-site toppling counts.
using Odometer = GridField<Count>;

/// Visits every point of the cube Q_radius in flat (lexicographic) order.
template <typename Fn>
void for_each_point(int dim, std::int64_t radius, Fn&& fn) {
  Point p = Point::Constant(dim, -radius);
  for (;;) {
    fn(const_cast<const Point&>(p));
    int a = dim - 1;
    while (a >= 0 && p[a] == radius) p[a--] = -radius;
    if (a < 0) return;
    ++p[a];
  }
}

/// Visits every point of an axis-aligned box in flat order.
template <typename Fn>
void for_each_point(const Box& box, Fn&& fn) {
  if ((box.lo > box.hi).any()) return;
  Point p = box.lo;
  for (;;) {
    fn(const_cast<const Point&>(p));
    int a = box.dim() - 1;
    while (a >= 0 && p[a] == box.hi[a]) p[a--] = box.lo[a];
    if (a < 0) return;
    ++p[a];
  }
}

}  // namespace spg
