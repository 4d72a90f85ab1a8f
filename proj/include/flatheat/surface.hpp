#pragma once

// Flat tori and flat Klein bottles: orbits, distances and minimal geodesics.
//
// The Klein bottle of height b is R^2 modulo (x1,x2) ~ (1+x1,x2) ~ (1-x1,b+x2).
// Its orientable double cover is the rectangular torus with basis
// (1,0), (0,2b); the Klein bottle is that torus modulo the glide reflection.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <variant>
#include <vector>

#include "flatheat/errors.hpp"
#include "flatheat/lattice.hpp"

namespace flatheat {

enum class SurfaceKind { Torus, KleinBottle };

template <typename Scalar>
struct KleinBottle {
  Scalar b;
};

template <typename Scalar>
class FlatSurface {
 public:
  using Vector = Vector2<Scalar>;
  using Matrix = Matrix2<Scalar>;

  static FlatSurface torus(const ReducedLattice<Scalar>& lattice) { return FlatSurface(lattice); }

  static FlatSurface klein(Scalar b) {
    if (!(b > 0) || !std::isfinite(double(b))) throw Error(ErrorCode::InvalidParameter, "Klein bottle height must be positive");
    return FlatSurface(KleinBottle<Scalar>{b});
  }

  SurfaceKind kind() const { return std::holds_alternative<KleinBottle<Scalar>>(shape_) ? SurfaceKind::KleinBottle : SurfaceKind::Torus; }
  bool is_torus() const { return kind() == SurfaceKind::Torus; }
  bool is_klein() const { return kind() == SurfaceKind::KleinBottle; }

  const ReducedLattice<Scalar>& lattice() const {
    if (!is_torus()) throw Error(ErrorCode::InvalidParameter, "Klein bottle has no defining lattice");
    return std::get<ReducedLattice<Scalar>>(shape_);
  }

  /// a for a torus, 0 for a Klein bottle.
  Scalar a() const { return is_torus() ? lattice().a() : Scalar(0); }
  /// b of the lattice, or the Klein bottle height.
  Scalar b() const { return is_torus() ? lattice().b() : std::get<KleinBottle<Scalar>>(shape_).b; }
  Scalar area() const { return b(); }

  /// Basis of the translation lattice acting on the plane: the torus lattice
  /// itself, or the double-cover lattice (1,0), (0,2b) for a Klein bottle.
  Matrix translation_basis() const {
    if (is_torus()) return lattice().basis();
    Matrix m;
    m << Scalar(1), Scalar(0), Scalar(0), 2 * b();
    return m;
  }

  /// Glide reflection generating the Klein bottle from its double cover.
  Vector glide(const Vector& y) const { return Vector(Scalar(1) - y.x(), b() + y.y()); }

  bool same_as(const FlatSurface& other) const {
    return kind() == other.kind() && a() == other.a() && b() == other.b();
  }

 private:
  explicit FlatSurface(std::variant<ReducedLattice<Scalar>, KleinBottle<Scalar>> shape) : shape_(std::move(shape)) {}

  std::variant<ReducedLattice<Scalar>, KleinBottle<Scalar>> shape_;
};

template <typename Scalar>
struct Geodesic {
  Vector2<Scalar> base;
  Vector2<Scalar> direction;
  Scalar s_max;

  Vector2<Scalar> at(Scalar s) const { return base + s * direction; }
};

/// All plane points representing y within `shell` translation steps.
/// Torus: y + m b1 + n b2. Klein: y + (m, 2kb) and glide(y) + (m, 2kb).
template <typename Scalar>
std::vector<Vector2<Scalar>> orbit_representatives(const FlatSurface<Scalar>& surface, const Vector2<Scalar>& y,
                                                   int shell) {
  using Vector = Vector2<Scalar>;
  if (shell < 1) throw Error(ErrorCode::InvalidParameter, "shell must be >= 1");
  const Matrix2<Scalar> basis = surface.translation_basis();
  std::vector<Vector> seeds = {y};
  if (surface.is_klein()) seeds.push_back(surface.glide(y));
  std::vector<Vector> reps;
  reps.reserve(seeds.size() * (2 * shell + 1) * (2 * shell + 1));
  for (const auto& seed : seeds) {
    for (int m = -shell; m <= shell; ++m) {
      for (int n = -shell; n <= shell; ++n) reps.push_back(seed + basis * Vector(Scalar(m), Scalar(n)));
    }
  }
  return reps;
}

namespace detail {

/// Distance from z to the nearest integer multiple of `period`.
template <typename Scalar>
Scalar fold(Scalar z, Scalar period) {
  using std::abs;
  using std::round;
  return abs(z - period * round(z / period));
}

/// Distance from z to the nearest odd multiple of `half`, i.e. to half + 2*half*k.
template <typename Scalar>
Scalar fold_odd(Scalar z, Scalar half) {
  using std::abs;
  using std::floor;
  const Scalar n = 2 * floor(z / (2 * half)) + 1;
  return std::min({abs(z - n * half), abs(z - (n - 2) * half), abs(z - (n + 2) * half)});
}

}  // namespace detail

/// Geodesic distance on the surface. Exact: the torus case reduces the
/// displacement into the Voronoi cell; the Klein case folds each orbit family
/// coordinatewise in the rectangular double cover. Symmetric in x and y
/// bit for bit.
template <typename Scalar>
Scalar surface_distance(const FlatSurface<Scalar>& surface, const Vector2<Scalar>& x, const Vector2<Scalar>& y) {
  using std::hypot;
  if (surface.is_torus()) return torus_distance(surface.lattice(), x, y);
  const Scalar b = surface.b();
  // Translates of y: displacement y - x modulo (1, 2b).
  const Scalar direct = hypot(detail::fold(y.x() - x.x(), Scalar(1)), detail::fold(y.y() - x.y(), 2 * b));
  // Translates of glide(y): displacement (1 - x1 - y1, b + y2 - x2); the first
  // coordinate folds like x1 + y1, the second like y2 - x2 against odd multiples of b.
  const Scalar glided = hypot(detail::fold(x.x() + y.x(), Scalar(1)), detail::fold_odd(y.y() - x.y(), b));
  return std::min(direct, glided);
}

/// Orbit minimum by adaptive shell growth. Stops once no representative in
/// the next shell can beat the current minimum. Slower than
/// surface_distance; kept as an independent route.
template <typename Scalar>
Scalar orbit_distance(const FlatSurface<Scalar>& surface, const Vector2<Scalar>& x, const Vector2<Scalar>& y) {
  using Vector = Vector2<Scalar>;
  const Matrix2<Scalar> basis = surface.translation_basis();
  const Scalar sigma_min = Eigen::JacobiSVD<Matrix2<Scalar>>(basis).singularValues().minCoeff();
  std::vector<Vector> seeds = {y};
  if (surface.is_klein()) seeds.push_back(surface.glide(y));
  Scalar reach = 0;
  for (const auto& s : seeds) reach = std::max(reach, Scalar((x - s).norm()));
  Scalar best = std::numeric_limits<Scalar>::infinity();
  for (int k = 0;; ++k) {
    for (const auto& seed : seeds) {
      for (int m = -k; m <= k; ++m) {
        for (int n = -k; n <= k; ++n) {
          if (std::max(std::abs(m), std::abs(n)) != k) continue;
          best = std::min(best, Scalar((seed + basis * Vector(Scalar(m), Scalar(n)) - x).norm()));
        }
      }
    }
    if (best <= sigma_min * Scalar(k + 1) - reach) return best;
  }
}

inline constexpr double kGeodesicTolerance = 1e-12;

/// Minimal geodesic from `base` in `direction`, with s_max the arc length to
/// the cut locus. Tori: exact via the Voronoi cell. Klein bottles: bisection
/// on the predicate surface_distance(base, base + s u) == s.
template <typename Scalar>
Geodesic<Scalar> minimal_geodesic(const FlatSurface<Scalar>& surface, const Vector2<Scalar>& base,
                                  const Vector2<Scalar>& direction) {
  using std::abs;
  using std::hypot;
  using std::sqrt;
  if (abs(direction.norm() - 1) > Scalar(1e-9)) throw Error(ErrorCode::InvalidParameter, "direction must be a unit vector");
  if (surface.is_torus()) return {base, direction, cut_distance(surface.lattice(), direction)};

  const Scalar b = surface.b();
  auto minimal = [&](Scalar s) {
    return surface_distance(surface, base, Vector2<Scalar>(base + s * direction)) >= s - Scalar(1e-13) * (1 + s);
  };
  // Shortest closed geodesic loop through the base point.
  const Scalar gap = std::min({Scalar(1), 2 * b, hypot(detail::fold(2 * base.x(), Scalar(1)), b)});
  Scalar lo = gap / 2;
  Scalar hi = sqrt(1 + 4 * b * b);
  while (!minimal(lo) && lo > Scalar(1e-300)) lo /= 2;
  while (hi - lo > Scalar(kGeodesicTolerance) * std::max(Scalar(1), hi)) {
    const Scalar mid = (lo + hi) / 2;
    (minimal(mid) ? lo : hi) = mid;
  }
  return {base, direction, lo};
}

using FlatSurfaced = FlatSurface<double>;
using Geodesicd = Geodesic<double>;

}  // namespace flatheat
