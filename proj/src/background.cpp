#include "spg/background.hpp"

#include "spg/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace spg {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(item);
  return parts;
}

std::int64_t parse_int(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const std::int64_t v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad integer for ") + what + ": '" + s + "'");
  }
}

double parse_real(const std::string& s, const char* what) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(std::string("bad real for ") + what + ": '" + s + "'");
  }
}

}  // namespace

double site_uniform(std::uint64_t seed, const Point& x) {
  std::uint64_t h = mix64(seed ^ 0x5851f42d4c957f2dULL);
  for (Eigen::Index i = 0; i < x.size(); ++i)
    h = mix64(h ^ (static_cast<std::uint64_t>(x[i]) * 0x9ddfea08eb382d69ULL));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

Background Background::constant(int dim, Height h) {
  Background b;
  b.kind_ = Kind::Constant;
  b.dim_ = dim;
  b.h_ = h;
  b.validate_stable();
  return b;
}

Background Background::lambda_augmented(int dim, Height h, std::int64_t m) {
  if (m < 1) throw std::invalid_argument("lambda background: modulus must be >= 1");
  Background b;
  b.kind_ = Kind::LambdaAugmented;
  b.dim_ = dim;
  b.h_ = h;
  b.m_ = m;
  b.validate_stable();
  return b;
}

Background Background::lattice_augmented(int dim, Height h, GeneratorMatrix generators) {
  if (generators.rows() != dim || generators.cols() != dim)
    throw std::invalid_argument("lattice background: generator matrix must be d x d");
  Background b;
  b.kind_ = Kind::LatticeAugmented;
  b.dim_ = dim;
  b.h_ = h;
  b.gens_ = std::move(generators);
  b.det_ = det_int(b.gens_);
  if (b.det_ == 0) throw std::invalid_argument("lattice background: generators are singular");
  for (int j = 0; j < dim; ++j) {
    std::int64_t g = 0;
    for (int i = 0; i < dim; ++i) g = std::gcd(g, b.gens_(j, i));
    if (g != 1)
      throw std::invalid_argument(
          "lattice background: coordinate " + std::to_string(j + 1) +
          " components of the generators must have gcd 1");
  }
  b.adj_ = adjugate_int(b.gens_);
  b.validate_stable();
  return b;
}

Background Background::bernoulli_augmented(int dim, Height h, double eps, std::uint64_t seed) {
  if (eps < 0.0 || eps > 1.0)
    throw std::invalid_argument("bernoulli background: eps must be in [0,1]");
  Background b;
  b.kind_ = Kind::BernoulliAugmented;
  b.dim_ = dim;
  b.h_ = h;
  b.eps_ = eps;
  b.seed_ = seed;
  b.validate_stable();
  return b;
}

Background Background::boxes(int dim, Height interior_h, Height shell_h,
                             std::vector<std::int64_t> shell_radii) {
  std::sort(shell_radii.begin(), shell_radii.end());
  for (std::size_t i = 0; i < shell_radii.size(); ++i) {
    if (shell_radii[i] < 0) throw std::invalid_argument("boxes background: negative shell radius");
    if (i && shell_radii[i] == shell_radii[i - 1])
      throw std::invalid_argument("boxes background: duplicate shell radius");
  }
  Background b;
  b.kind_ = Kind::Boxes;
  b.dim_ = dim;
  b.h_ = interior_h;
  b.shell_h_ = shell_h;
  b.shell_radii_ = std::move(shell_radii);
  b.validate_stable();
  return b;
}

void Background::validate_stable() const {
  if (dim_ < 1 || dim_ > kMaxDim)
    throw std::invalid_argument("background dimension must be in 1.." + std::to_string(kMaxDim));
  if (max_height() > 2 * dim_ - 1)
    throw std::invalid_argument("unstable background: height " + std::to_string(max_height()) +
                                " exceeds 2d-1 = " + std::to_string(2 * dim_ - 1));
}

Height Background::max_height() const {
  switch (kind_) {
    case Kind::Constant: return h_;
    case Kind::LambdaAugmented: return m_ == 1 ? h_ : h_ + 1;  // Lambda(1) is empty
    case Kind::LatticeAugmented: return h_ + 1;
    case Kind::BernoulliAugmented: return eps_ > 0.0 ? h_ + 1 : h_;
    case Kind::Boxes: return std::max(h_, shell_radii_.empty() ? h_ : shell_h_);
  }
  return h_;
}

Height Background::min_height() const {
  switch (kind_) {
    case Kind::Constant: return h_;
    case Kind::LambdaAugmented: return h_;
    case Kind::LatticeAugmented: return h_;
    case Kind::BernoulliAugmented: return h_;
    case Kind::Boxes: return std::min(h_, shell_radii_.empty() ? h_ : shell_h_);
  }
  return h_;
}

bool Background::in_lattice(const Point& x) const {
  // x is in the column lattice of G iff adj(G) x == 0 mod det(G) componentwise.
  const std::int64_t d = det_ < 0 ? -det_ : det_;
  for (int i = 0; i < dim_; ++i) {
    std::int64_t v = 0;
    for (int j = 0; j < dim_; ++j) v += adj_(i, j) * x[j];
    if (v % d != 0) return false;
  }
  return true;
}

Height Background::max_height_on_hyperplane(int axis, std::int64_t value) const {
  if (axis < 1 || axis > dim_) throw std::out_of_range("hyperplane axis out of range");
  switch (kind_) {
    case Kind::Constant:
      return h_;
    case Kind::LambdaAugmented:
      // a divisible coordinate pins the whole hyperplane outside Lambda(m)
      return value % m_ == 0 ? h_ : h_ + 1;
    case Kind::LatticeAugmented:
      // the gcd-1 condition makes the sublattice meet every coordinate
      // hyperplane, so augmented sites always exist on it
      return h_ + 1;
    case Kind::BernoulliAugmented:
      return eps_ > 0.0 ? h_ + 1 : h_;
    case Kind::Boxes: {
      Height m = h_;
      const std::int64_t v = value < 0 ? -value : value;
      for (const std::int64_t r : shell_radii_) {
        // the hyperplane meets the shell of Q_r iff it can host a site with
        // exactly one coordinate at r+1
        const bool hits = (v == r + 1) || (dim_ >= 2 && v <= r);
        if (hits) m = std::max(m, shell_h_);
      }
      return m;
    }
  }
  return h_;
}

Height Background::operator()(const Point& x) const {
  switch (kind_) {
    case Kind::Constant:
      return h_;
    case Kind::LambdaAugmented: {
      for (Eigen::Index i = 0; i < x.size(); ++i)
        if (x[i] % m_ == 0) return h_;
      return h_ + 1;
    }
    case Kind::LatticeAugmented:
      return in_lattice(x) ? h_ + 1 : h_;
    case Kind::BernoulliAugmented:
      return site_uniform(seed_, x) < eps_ ? h_ + 1 : h_;
    case Kind::Boxes: {
      const std::int64_t m = cube_norm(x);
      if (m > 0) {
        Eigen::Index at_max = 0;
        for (Eigen::Index i = 0; i < x.size(); ++i)
          if (x[i] == m || x[i] == -m) ++at_max;
        // boundary shell of Q_r: exactly one coordinate sticks out to r+1
        if (at_max == 1 &&
            std::binary_search(shell_radii_.begin(), shell_radii_.end(), m - 1))
          return shell_h_;
      }
      return h_;
    }
  }
  return h_;
}

GridWindow Background::window(std::int64_t radius) const {
  GridWindow w(dim_, radius);
  if (kind_ == Kind::Constant) {
    w.array().setConstant(h_);
    return w;
  }
  Index i = 0;
  for_each_point(dim_, radius, [&](const Point& p) { w[i++] = (*this)(p); });
  return w;
}

std::string Background::descriptor() const {
  std::ostringstream out;
  switch (kind_) {
    case Kind::Constant:
      out << "constant:" << h_;
      break;
    case Kind::LambdaAugmented:
      out << "lambda:" << h_ << ":" << m_;
      break;
    case Kind::LatticeAugmented: {
      out << "lattice:" << h_ << ":";
      for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
          out << (i || j ? "," : "") << gens_(i, j);
      break;
    }
    case Kind::BernoulliAugmented:
      out << "bernoulli:" << h_ << ":" << eps_ << ":" << seed_;
      break;
    case Kind::Boxes: {
      out << "boxes:" << h_ << ":" << shell_h_ << ":";
      for (std::size_t i = 0; i < shell_radii_.size(); ++i)
        out << (i ? "," : "") << shell_radii_[i];
      break;
    }
  }
  return out.str();
}

Background Background::parse(int dim, const std::string& descriptor) {
  const auto parts = split(descriptor, ':');
  if (parts.empty()) throw std::invalid_argument("empty background descriptor");
  const std::string& kind = parts[0];
  auto need = [&](std::size_t n) {
    if (parts.size() != n)
      throw std::invalid_argument("background '" + kind + "' expects " + std::to_string(n - 1) +
                                  " field(s): got '" + descriptor + "'");
  };
  if (kind == "constant") {
    need(2);
    return constant(dim, static_cast<Height>(parse_int(parts[1], "height")));
  }
  if (kind == "lambda") {
    need(3);
    return lambda_augmented(dim, static_cast<Height>(parse_int(parts[1], "height")),
                            parse_int(parts[2], "modulus"));
  }
  if (kind == "lattice") {
    need(3);
    const auto entries = split(parts[2], ',');
    if (entries.size() != static_cast<std::size_t>(dim) * dim)
      throw std::invalid_argument("lattice background expects d*d matrix entries (row-major)");
    GeneratorMatrix g(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        g(i, j) = parse_int(entries[static_cast<std::size_t>(i) * dim + j], "matrix entry");
    return lattice_augmented(dim, static_cast<Height>(parse_int(parts[1], "height")),
                             std::move(g));
  }
  if (kind == "bernoulli") {
    need(4);
    return bernoulli_augmented(dim, static_cast<Height>(parse_int(parts[1], "height")),
                               parse_real(parts[2], "eps"),
                               static_cast<std::uint64_t>(parse_int(parts[3], "seed")));
  }
  if (kind == "boxes") {
    need(4);
    const auto entries = split(parts[3], ',');
    std::vector<std::int64_t> radii;
    for (const auto& e : entries) radii.push_back(parse_int(e, "shell radius"));
    return boxes(dim, static_cast<Height>(parse_int(parts[1], "interior height")),
                 static_cast<Height>(parse_int(parts[2], "shell height")), std::move(radii));
  }
  throw std::invalid_argument("unknown background kind '" + kind + "'");
}

Background Background::with_seed(std::uint64_t seed) const {
  Background b = *this;
  b.seed_ = seed;
  return b;
}

}  // namespace spg
