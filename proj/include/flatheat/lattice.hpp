#pragma once

// Rank-2 planar lattices: Lagrange-Gauss reduction to the normal form
// {(1,0), (-a,b)}, symmetry classification, dual basis and Voronoi geometry.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string_view>
#include <utility>
#include <vector>

#include "flatheat/errors.hpp"

namespace flatheat {

template <typename Scalar>
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
template <typename Scalar>
using Matrix2 = Eigen::Matrix<Scalar, 2, 2>;

template <typename Scalar>
struct RawBasis {
  Vector2<Scalar> u;
  Vector2<Scalar> v;
};

enum class LatticeTag { Rectangular, Square, Isosceles, Honeycomb, Generic };

constexpr std::string_view to_string(LatticeTag tag) {
  switch (tag) {
    case LatticeTag::Rectangular: return "Rectangular";
    case LatticeTag::Square: return "Square";
    case LatticeTag::Isosceles: return "Isosceles";
    case LatticeTag::Honeycomb: return "Honeycomb";
    case LatticeTag::Generic: return "Generic";
  }
  return "Unknown";
}

template <typename Scalar>
struct LatticeClass {
  LatticeTag tag;
  Scalar tolerance_used;
};

inline constexpr double kDefaultClassifyTolerance = 1e-9;

/// A lattice in normal form spanned by (1,0) and (-a,b) with 0 <= a <= 1/2,
/// b > 0 and a^2 + b^2 >= 1, together with the similarity that maps it back
/// onto the basis it was reduced from:
///
///   input = scale * Q * [(1,0) (-a,b)] * basis_change,
///   Q = R(rotation) * diag(1, reflected ? -1 : 1).
///
/// Reflection is needed when the input lattice is the mirror image of its
/// normal form; rotations alone cannot realise every reduction.
template <typename Scalar>
class ReducedLattice {
 public:
  using Vector = Vector2<Scalar>;
  using Matrix = Matrix2<Scalar>;

  /// A lattice already in normal form (identity transform). Values within
  /// rounding of the admissible region are clamped into it.
  static ReducedLattice canonical(Scalar a, Scalar b) {
    using std::abs;
    const Scalar slack = Scalar(1e-12);
    if (!(b > 0) || !std::isfinite(double(a)) || !std::isfinite(double(b)) || a < -slack ||
        a > Scalar(0.5) + slack || a * a + b * b < Scalar(1) - slack) {
      throw Error(ErrorCode::InvalidParameter,
                  "lattice parameters outside 0<=a<=1/2, b>0, a^2+b^2>=1");
    }
    ReducedLattice lat;
    lat.a_ = std::clamp(a, Scalar(0), Scalar(0.5));
    lat.b_ = b;
    return lat;
  }

  static ReducedLattice square() { return canonical(Scalar(0), Scalar(1)); }
  static ReducedLattice honeycomb() {
    using std::sqrt;
    return canonical(Scalar(0.5), sqrt(Scalar(3)) / 2);
  }

  Scalar a() const { return a_; }
  Scalar b() const { return b_; }
  Scalar scale() const { return scale_; }
  Scalar rotation() const { return rotation_; }
  bool reflected() const { return reflected_; }
  const Eigen::Matrix2i& basis_change() const { return basis_change_; }

  Vector first() const { return Vector(Scalar(1), Scalar(0)); }
  Vector second() const { return Vector(-a_, b_); }

  /// Basis vectors as columns.
  Matrix basis() const {
    Matrix m;
    m << Scalar(1), -a_, Scalar(0), b_;
    return m;
  }

  Scalar covolume() const { return b_; }

  /// Lattice coordinates (p, q) of x = p * first() + q * second().
  Vector lattice_coordinates(const Vector& x) const {
    const Scalar q = x.y() / b_;
    return Vector(x.x() + a_ * q, q);
  }

  Vector point(const Vector& coords) const {
    return Vector(coords.x() - a_ * coords.y(), b_ * coords.y());
  }

  Matrix orthogonal_part() const {
    using std::cos;
    using std::sin;
    Matrix r;
    r << cos(rotation_), -sin(rotation_), sin(rotation_), cos(rotation_);
    if (reflected_) r.col(1) = -r.col(1);
    return r;
  }

  /// The basis (as columns) this lattice was reduced from.
  Matrix reconstruct() const {
    return scale_ * orthogonal_part() * basis() * basis_change_.template cast<Scalar>();
  }

 private:
  template <typename S>
  friend ReducedLattice<S> reduce(const RawBasis<S>& basis);

  ReducedLattice() = default;

  Scalar a_ = 0;
  Scalar b_ = 1;
  Scalar scale_ = 1;
  Scalar rotation_ = 0;
  bool reflected_ = false;
  Eigen::Matrix2i basis_change_ = Eigen::Matrix2i::Identity();
};

namespace detail {

template <typename Scalar>
Scalar cross(const Vector2<Scalar>& u, const Vector2<Scalar>& v) {
  return u.x() * v.y() - u.y() * v.x();
}

inline Eigen::Matrix2i unimodular_inverse(const Eigen::Matrix2i& m) {
  const int det = m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  Eigen::Matrix2i inv;
  inv << m(1, 1), -m(0, 1), -m(1, 0), m(0, 0);
  return det * inv;  // det is +-1, so 1/det == det
}

}  // namespace detail

/// Lagrange-Gauss reduction followed by the similarity normalisation that
/// sends the shortest vector to (1,0) and the second to (-a,b).
template <typename Scalar>
ReducedLattice<Scalar> reduce(const RawBasis<Scalar>& basis) {
  using std::abs;
  using std::atan2;
  using std::round;
  using std::sqrt;
  using Vector = Vector2<Scalar>;
  constexpr Scalar eps = std::numeric_limits<Scalar>::epsilon();

  const Scalar det = detail::cross(basis.u, basis.v);
  const Scalar size = basis.u.norm() * basis.v.norm();
  if (!std::isfinite(double(size)) || !(abs(det) > 64 * eps * size)) {
    throw Error(ErrorCode::DegenerateBasis, "basis vectors are (numerically) dependent");
  }

  Vector b1 = basis.u;
  Vector b2 = basis.v;
  // Columns hold the integer coordinates of b1, b2 in the input basis.
  Eigen::Matrix2i coords = Eigen::Matrix2i::Identity();
  for (int iter = 0; iter < 10000; ++iter) {
    if (b2.squaredNorm() < b1.squaredNorm()) {
      std::swap(b1, b2);
      coords.col(0).swap(coords.col(1));
    }
    const Scalar mu = round(b1.dot(b2) / b1.squaredNorm());
    if (mu == 0) break;
    const int k = static_cast<int>(mu);
    b2 -= mu * b1;
    coords.col(1) -= k * coords.col(0);
  }

  const Scalar scale = b1.norm();
  const Scalar s2 = scale * scale;
  Scalar c = b1.dot(b2) / s2;
  Scalar d = detail::cross(b1, b2) / s2;
  if (d < 0) {
    b2 = -b2;
    coords.col(1) = -coords.col(1);
    c = -c;
    d = -d;
  }
  bool reflected = false;
  if (c > 0) {
    if (c >= Scalar(0.5) - 16 * eps) {
      // (c, d) and (c - 1, d) are equally short; take the one with c <= 0.
      coords.col(1) -= coords.col(0);
      c -= 1;
    } else {
      // Mirror image of the normal form; the canonical second vector is the
      // reflection of -b2.
      reflected = true;
      coords.col(1) = -coords.col(1);
      c = -c;
    }
  }

  ReducedLattice<Scalar> lat;
  lat.a_ = std::clamp(-c, Scalar(0), Scalar(0.5));
  lat.b_ = d;
  lat.scale_ = scale;
  lat.rotation_ = atan2(b1.y(), b1.x());
  lat.reflected_ = reflected;
  lat.basis_change_ = detail::unimodular_inverse(coords);
  return lat;
}

/// Symmetry class of a reduced lattice. Ties go to the more symmetric class.
template <typename Scalar>
LatticeClass<Scalar> classify(const ReducedLattice<Scalar>& lat,
                              Scalar tol = Scalar(kDefaultClassifyTolerance)) {
  using std::abs;
  using std::sqrt;
  if (!(tol > 0)) throw Error(ErrorCode::InvalidParameter, "classification tolerance must be positive");
  const Scalar a = lat.a();
  const Scalar b = lat.b();
  LatticeTag tag = LatticeTag::Generic;
  if (abs(a) <= tol) {
    tag = abs(b - 1) <= tol ? LatticeTag::Square : LatticeTag::Rectangular;
  } else if (abs(a - Scalar(0.5)) <= tol && abs(b - sqrt(Scalar(3)) / 2) <= tol) {
    tag = LatticeTag::Honeycomb;
  } else if (abs(a * a + b * b - 1) <= tol) {
    tag = LatticeTag::Isosceles;
  }
  return {tag, tol};
}

template <typename Scalar>
struct DualBasis {
  Vector2<Scalar> v1;
  Vector2<Scalar> v2;
};

/// Basis of the dual lattice: v_i . b_j is an integer for both primal vectors.
template <typename Scalar>
DualBasis<Scalar> dual(const ReducedLattice<Scalar>& lat) {
  return {Vector2<Scalar>(Scalar(1), lat.a() / lat.b()), Vector2<Scalar>(Scalar(0), Scalar(1) / lat.b())};
}

template <typename Scalar>
struct VoronoiCell {
  std::vector<Vector2<Scalar>> relevant_vectors;  // counterclockwise, starting at (1,0)
  std::vector<Vector2<Scalar>> vertices;          // counterclockwise

  Scalar area() const {
    Scalar twice = 0;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) twice += detail::cross(vertices[i], vertices[(i + 1) % n]);
    return twice / 2;
  }

  /// Largest violation of the half-plane constraints x . l <= |l|^2 / 2.
  Scalar excess(const Vector2<Scalar>& x) const {
    Scalar worst = -std::numeric_limits<Scalar>::infinity();
    for (const auto& l : relevant_vectors) worst = std::max(worst, x.dot(l) - l.squaredNorm() / 2);
    return worst;
  }

  bool contains(const Vector2<Scalar>& x, Scalar tol = Scalar(0)) const { return excess(x) <= tol; }
};

template <typename Scalar>
VoronoiCell<Scalar> voronoi(const ReducedLattice<Scalar>& lat) {
  using Vector = Vector2<Scalar>;
  const Vector b1 = lat.first();
  const Vector b2 = lat.second();
  // b1 . b2 = -a <= 0, so b1 + b2 is the third relevant direction.
  std::vector<Vector> rel = {b1, b1 + b2, b2, -b1, -(b1 + b2), -b2};

  auto vertex = [](const Vector& l, const Vector& m) {
    Matrix2<Scalar> sys;
    sys << l.x(), l.y(), m.x(), m.y();
    return Vector(sys.inverse() * Vector(l.squaredNorm() / 2, m.squaredNorm() / 2));
  };

  VoronoiCell<Scalar> cell;
  const Vector v0 = vertex(rel[0], rel[1]);
  const Vector v1 = vertex(rel[1], rel[2]);
  if ((v0 - v1).norm() <= Scalar(1e-12)) {
    // Rectangular: the b1 + b2 bisector only touches the cell at a corner.
    cell.relevant_vectors = {b1, b2, -b1, -b2};
    const Scalar hx = Scalar(0.5);
    const Scalar hy = lat.b() / 2;
    cell.vertices = {Vector(hx, hy), Vector(-hx, hy), Vector(-hx, -hy), Vector(hx, -hy)};
    return cell;
  }
  cell.relevant_vectors = rel;
  for (std::size_t i = 0; i < rel.size(); ++i) cell.vertices.push_back(vertex(rel[i], rel[(i + 1) % rel.size()]));
  return cell;
}

/// Arc length at which the ray s*u from the origin leaves the Voronoi cell,
/// i.e. meets the cut locus of the origin on the torus.
template <typename Scalar>
Scalar cut_distance(const ReducedLattice<Scalar>& lat, const Vector2<Scalar>& u) {
  using std::abs;
  if (abs(u.norm() - 1) > Scalar(1e-9)) throw Error(ErrorCode::InvalidParameter, "direction must be a unit vector");
  const auto cell = voronoi(lat);
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (const auto& l : cell.relevant_vectors) {
    const Scalar proj = u.dot(l);
    if (proj > 0) best = std::min(best, l.squaredNorm() / (2 * proj));
  }
  return best;
}

/// The representative of the displacement d modulo the lattice that lies in
/// the Voronoi cell of the origin.
template <typename Scalar>
Vector2<Scalar> voronoi_representative(const ReducedLattice<Scalar>& lat, const Vector2<Scalar>& d) {
  using std::round;
  using Vector = Vector2<Scalar>;
  Vector w = lat.lattice_coordinates(d);
  w = Vector(w.x() - round(w.x()), w.y() - round(w.y()));
  const Vector base = lat.point(w);
  Vector best = base;
  Scalar best_norm = base.squaredNorm();
  for (int m = -1; m <= 1; ++m) {
    for (int n = -1; n <= 1; ++n) {
      if (m == 0 && n == 0) continue;
      const Vector cand = base - lat.point(Vector(Scalar(m), Scalar(n)));
      const Scalar nrm = cand.squaredNorm();
      if (nrm < best_norm) {
        best_norm = nrm;
        best = cand;
      }
    }
  }
  return best;
}

template <typename Scalar>
Scalar torus_distance(const ReducedLattice<Scalar>& lat, const Vector2<Scalar>& x, const Vector2<Scalar>& y) {
  return voronoi_representative(lat, Vector2<Scalar>(x - y)).norm();
}

using ReducedLatticed = ReducedLattice<double>;
using RawBasisd = RawBasis<double>;
using VoronoiCelld = VoronoiCell<double>;
using DualBasisd = DualBasis<double>;

}  // namespace flatheat
