#include "flatheat/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <tuple>

#include "flatheat/detail/gaussian_tail.hpp"

namespace flatheat {
namespace {

constexpr double kPi = std::numbers::pi;
using detail::kUnitRoundoff;

struct LatticePoint {
  Vec2 p;
  int m;
  int n;
  double norm2;
};

double packing_radius(const Eigen::Matrix2d& basis) {
  return reduce(RawBasisd{basis.col(0), basis.col(1)}).scale() / 2;
}

/// Points B (m, n) with |B (m, n)| <= radius, sorted by (|p|^2, m, n).
std::vector<LatticePoint> lattice_points(const Eigen::Matrix2d& basis, double radius, long budget) {
  const double covolume = std::abs(basis.determinant());
  const double rho = packing_radius(basis);
  const double estimate = kPi * (radius + rho) * (radius + rho) / covolume;
  if (estimate > double(budget)) {
    throw Error(ErrorCode::ToleranceUnreachable, "lattice sum would need about " + std::to_string(long(estimate)) +
                                                     " terms, over the budget of " + std::to_string(budget));
  }
  const double sigma = Eigen::JacobiSVD<Eigen::Matrix2d>(basis).singularValues().minCoeff();
  const int box = static_cast<int>(std::floor(radius / sigma)) + 1;
  std::vector<LatticePoint> pts;
  const double r2 = radius * radius;
  for (int m = -box; m <= box; ++m) {
    for (int n = -box; n <= box; ++n) {
      const Vec2 p = basis * Vec2(m, n);
      const double n2 = p.squaredNorm();
      if (n2 <= r2) pts.push_back({p, m, n, n2});
    }
  }
  std::sort(pts.begin(), pts.end(), [](const LatticePoint& l, const LatticePoint& r) {
    return std::tie(l.norm2, l.m, l.n) < std::tie(r.norm2, r.m, r.n);
  });
  return pts;
}

Eigen::Matrix2d dual_basis_matrix(const FlatSurfaced& surface) {
  Eigen::Matrix2d d;
  if (surface.is_torus()) {
    const auto db = dual(surface.lattice());
    d.col(0) = db.v1;
    d.col(1) = db.v2;
  } else {
    d << 1, 0, 0, 1 / (2 * surface.b());
  }
  return d;
}

double covering_radius(const FlatSurfaced& surface) {
  if (surface.is_klein()) return 0.5 * std::hypot(1.0, 2 * surface.b());
  double r = 0;
  for (const auto& v : voronoi(surface.lattice()).vertices) r = std::max(r, v.norm());
  return r;
}

void check_mode(const FlatSurfaced& surface, const SpectralMode& mode) {
  if (!mode.belongs_to(surface)) throw Error(ErrorCode::ModeSurfaceMismatch, "mode was enumerated for another surface");
}

double klein_weight(const KleinIndex& k, double b) { return (k.l1 > 0 ? 2.0 : 1.0) * (k.l2 > 0 ? 2.0 : 1.0) / b; }

}  // namespace

// --- modes -----------------------------------------------------------------

std::vector<SpectralMode> enumerate_modes(const FlatSurfaced& surface, double lambda_max, double tol) {
  if (!(lambda_max > 0)) throw Error(ErrorCode::InvalidParameter, "lambda_max must be positive");
  struct Candidate {
    double lambda;
    Vec2 dual;
    KleinIndex index;
  };
  std::vector<Candidate> cands;
  const double cap = lambda_max * (1 + tol);
  if (surface.is_torus()) {
    const double radius = std::sqrt(cap) / (2 * kPi);
    for (const auto& pt : lattice_points(dual_basis_matrix(surface), radius, kDefaultTermBudget)) {
      const bool zero = pt.m == 0 && pt.n == 0;
      if (!zero && !(pt.m > 0 || (pt.m == 0 && pt.n > 0))) continue;
      cands.push_back({4 * kPi * kPi * pt.norm2, pt.p, {}});
    }
  } else {
    const double b = surface.b();
    const int l1_max = static_cast<int>(std::floor(std::sqrt(cap) / (2 * kPi)));
    const int l2_max = static_cast<int>(std::floor(std::sqrt(cap) * b / kPi));
    for (int l1 = 0; l1 <= l1_max; ++l1) {
      for (int l2 = 0; l2 <= l2_max; ++l2) {
        const bool odd = l2 % 2 != 0;
        if (odd && l1 == 0) continue;
        const double k1 = 2 * kPi * l1;
        const double k2 = kPi * l2 / b;
        const double lambda = k1 * k1 + k2 * k2;
        if (lambda > cap) continue;
        const int functions = (l1 == 0 && l2 == 0) || l2 == 0 ? 1 : 2;
        cands.push_back({lambda, Vec2::Zero(), {l1, l2, odd ? KleinParity::Sine : KleinParity::Cosine, functions}});
      }
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Candidate& l, const Candidate& r) { return l.lambda < r.lambda; });
  }

  std::vector<SpectralMode> modes;
  for (const auto& c : cands) {
    if (modes.empty() || c.lambda - modes.back().eigenvalue > tol * std::max(1.0, c.lambda)) {
      SpectralMode mode;
      mode.eigenvalue = c.lambda;
      mode.surface_kind = surface.kind();
      mode.surface_a = surface.a();
      mode.surface_b = surface.b();
      modes.push_back(mode);
    }
    auto& mode = modes.back();
    if (surface.is_torus()) {
      mode.dual_generators.push_back(c.dual);
      mode.multiplicity += c.lambda == 0 ? 1 : 2;
    } else {
      mode.klein_generators.push_back(c.index);
      mode.multiplicity += c.index.functions;
    }
  }
  while (!modes.empty() && modes.back().eigenvalue > lambda_max) modes.pop_back();
  return modes;
}

SpectralMode principal_eigenvalue(const FlatSurfaced& surface) {
  double lambda1;
  if (surface.is_torus()) {
    const double shortest = 2 * packing_radius(dual_basis_matrix(surface));
    lambda1 = 4 * kPi * kPi * shortest * shortest;
  } else {
    const double b = surface.b();
    lambda1 = std::min(4 * kPi * kPi, 4 * kPi * kPi / (b * b));
  }
  const auto modes = enumerate_modes(surface, lambda1 * (1 + 1e-6));
  return modes.at(1);
}

SpectralMode mode_by_index(const FlatSurfaced& surface, int index) {
  if (index < 0) throw Error(ErrorCode::InvalidParameter, "mode index must be non-negative");
  if (index == 0) return enumerate_modes(surface, 1.0).front();
  double lambda_max = 2 * principal_eigenvalue(surface).eigenvalue;
  for (;;) {
    const auto modes = enumerate_modes(surface, lambda_max);
    // The last group may still be incomplete near the cutoff; require one spare.
    if (static_cast<int>(modes.size()) > index + 1) return modes[index];
    lambda_max *= 2;
  }
}

// --- heat kernel -----------------------------------------------------------

Representation HeatKernel::resolve(const FlatSurfaced& surface, double t, Representation requested) {
  if (requested != Representation::Auto) return requested;
  return 4 * kPi * t < surface.area() ? Representation::Image : Representation::Spectral;
}

HeatKernel::HeatKernel(const FlatSurfaced& surface, double t, double epsilon, Representation representation,
                       double decay_shift, long term_budget)
    : surface_(surface), t_(t), epsilon_(epsilon), rep_(Representation::Spectral), shift_(decay_shift) {
  if (!(t > 0) || !std::isfinite(t)) throw Error(ErrorCode::NonPositiveTime, "heat kernel time must be positive");
  if (!(epsilon > 0)) throw Error(ErrorCode::InvalidParameter, "epsilon must be positive");
  if (!(decay_shift >= 0)) throw Error(ErrorCode::InvalidParameter, "decay shift must be non-negative");
  rep_ = resolve(surface, t, representation);
  if (rep_ == Representation::Spectral) {
    build_spectral(term_budget);
  } else {
    build_image(term_budget);
  }
}

long HeatKernel::terms() const {
  return rep_ == Representation::Spectral ? long(spectral_.size()) : long(image_.size());
}

void HeatKernel::build_spectral(long term_budget) {
  const Eigen::Matrix2d basis = dual_basis_matrix(surface_);
  const double rho = packing_radius(basis);
  const double alpha = 4 * kPi * kPi * t_;
  const double prefactor = 1 / surface_.area();
  const double log_half_eps = std::log(epsilon_ / 2);
  const double st = shift_ * t_;

  const double radius = std::max({detail::truncation_radius(alpha, rho, 0, log_half_eps - std::log(prefactor)),
                                  detail::truncation_radius(alpha, rho, 0, log_half_eps - std::log(prefactor) - st),
                                  detail::truncation_radius(alpha, rho, 1,
                                                            log_half_eps - std::log(2 * kPi * prefactor) - st)});
  value_tail_ = prefactor * std::exp(detail::log_gaussian_tail_bound(radius, alpha, rho, 0));
  shifted_value_tail_ = prefactor * std::exp(st + detail::log_gaussian_tail_bound(radius, alpha, rho, 0));
  gradient_tail_ = 2 * kPi * prefactor * std::exp(st + detail::log_gaussian_tail_bound(radius, alpha, rho, 1));

  for (const auto& pt : lattice_points(basis, radius, term_budget)) {
    const bool zero = pt.m == 0 && pt.n == 0;
    double fold = 1;
    bool odd = false;
    if (surface_.is_torus()) {
      if (!zero && !(pt.m > 0 || (pt.m == 0 && pt.n > 0))) continue;
      fold = zero ? 1 : 2;
    } else {
      if (pt.m < 0 || pt.n < 0) continue;
      odd = pt.n % 2 != 0;
      if (odd && pt.m == 0) continue;
      fold = (pt.m > 0 ? 2.0 : 1.0) * (pt.n > 0 ? 2.0 : 1.0);
    }
    const double lambda = 4 * kPi * kPi * pt.norm2;
    SpectralTerm term;
    term.freq = 2 * kPi * pt.p;
    term.weight = fold * prefactor * std::exp(-lambda * t_);
    term.shifted_weight = zero ? 0.0 : fold * prefactor * std::exp(-(lambda - shift_) * t_);
    term.odd = odd;
    term.constant = zero;
    spectral_.push_back(term);
  }
}

void HeatKernel::build_image(long term_budget) {
  const Eigen::Matrix2d basis = surface_.translation_basis();
  const double rho = packing_radius(basis);
  const double families = surface_.is_klein() ? 2 : 1;
  const double alpha = 1 / (4 * t_);
  const double prefactor = families / (4 * kPi * t_);
  const double log_half_eps = std::log(epsilon_ / 2);
  const double st = shift_ * t_;

  const double radius = std::max(
      detail::truncation_radius(alpha, rho, 0, log_half_eps - std::log(prefactor)),
      detail::truncation_radius(alpha, rho, 1, log_half_eps - std::log(prefactor / (2 * t_)) - st));
  value_tail_ = prefactor * std::exp(detail::log_gaussian_tail_bound(radius, alpha, rho, 0));
  gradient_tail_ = prefactor / (2 * t_) * std::exp(st + detail::log_gaussian_tail_bound(radius, alpha, rho, 1));
  shifted_value_tail_ = std::numeric_limits<double>::infinity();

  // Displacements are folded into the Voronoi cell first, so every translate
  // within `radius` of the folded displacement is in this list.
  for (const auto& pt : lattice_points(basis, radius + covering_radius(surface_), term_budget)) {
    image_.push_back({pt.p});
  }
}

Vec2 HeatKernel::fold_cover(const Vec2& d) const {
  if (surface_.is_torus()) return voronoi_representative(surface_.lattice(), d);
  const double h = 2 * surface_.b();
  return Vec2(d.x() - std::round(d.x()), d.y() - h * std::round(d.y() / h));
}

double HeatKernel::spectral_term_value(const SpectralTerm& term, const Vec2& x, const Vec2& y, double weight,
                                       double& rounding_weight) const {
  if (surface_.is_torus()) {
    const double theta = term.freq.dot(x - y);
    rounding_weight = 10 + std::abs(theta);
    return weight * std::cos(theta);
  }
  const double f1 = term.freq.x();
  const double f2 = term.freq.y();
  const double c2 = std::cos(f2 * (x.y() - y.y()));
  const double xfactor = term.odd ? std::sin(f1 * x.x()) * std::sin(f1 * y.x())
                                  : std::cos(f1 * x.x()) * std::cos(f1 * y.x());
  rounding_weight = 10 + f1 * (std::abs(x.x()) + std::abs(y.x())) + std::abs(f2 * (x.y() - y.y()));
  return weight * xfactor * c2;
}

KernelValue HeatKernel::value(const Vec2& x, const Vec2& y) const {
  detail::CompensatedSum sum;
  double rounding = 0;
  if (rep_ == Representation::Spectral) {
    for (const auto& term : spectral_) {
      double rw = 0;
      sum.add(spectral_term_value(term, x, y, term.weight, rw));
      rounding += term.weight * rw;
    }
  } else {
    const double prefactor = 1 / (4 * kPi * t_);
    auto add_family = [&](const Vec2& d) {
      const Vec2 d0 = fold_cover(d);
      for (const auto& img : image_) {
        const double eta = (d0 - img.point).squaredNorm() / (4 * t_);
        const double term = prefactor * std::exp(-eta);
        sum.add(term);
        rounding += term * (10 + eta);
      }
    };
    add_family(x - y);
    if (surface_.is_klein()) add_family(x - surface_.glide(y));
  }
  KernelValue out;
  out.value = sum.value();
  out.error_bound = value_tail_ + kUnitRoundoff * rounding;
  out.terms_used = terms() * (rep_ == Representation::Image && surface_.is_klein() ? 2 : 1);
  out.representation_used = rep_;
  return out;
}

GradientValue HeatKernel::gradient(const Vec2& x, const Vec2& y) const {
  detail::CompensatedSum gx;
  detail::CompensatedSum gy;
  double rounding = 0;
  double scale = 0;
  if (rep_ == Representation::Spectral) {
    for (const auto& term : spectral_) {
      if (term.constant) continue;
      const double w = term.shifted_weight;
      const double mag = w * term.freq.norm();
      if (surface_.is_torus()) {
        const double theta = term.freq.dot(x - y);
        const double s = w * std::sin(theta);
        gx.add(s * term.freq.x());
        gy.add(s * term.freq.y());
        rounding += mag * (10 + std::abs(theta));
      } else {
        const double f1 = term.freq.x();
        const double f2 = term.freq.y();
        const double delta = x.y() - y.y();
        const double c2 = std::cos(f2 * delta);
        const double s2 = std::sin(f2 * delta);
        const double a1 = f1 * x.x();
        const double b1 = f1 * y.x();
        double xfactor;
        double dxfactor;  // derivative of the x1-factor in y1
        if (term.odd) {
          xfactor = std::sin(a1) * std::sin(b1);
          dxfactor = std::sin(a1) * (f1 * std::cos(b1));
        } else {
          xfactor = std::cos(a1) * std::cos(b1);
          dxfactor = -std::cos(a1) * (f1 * std::sin(b1));
        }
        gx.add(w * dxfactor * c2);
        gy.add(w * xfactor * (f2 * s2));
        rounding += mag * (10 + std::abs(a1) + std::abs(b1) + std::abs(f2 * delta));
      }
      scale += mag;
    }
  } else {
    const double st = shift_ * t_;
    const double prefactor = 1 / (4 * kPi * t_);
    auto add_family = [&](const Vec2& d, double flip_x) {
      const Vec2 d0 = fold_cover(d);
      for (const auto& img : image_) {
        const Vec2 p = d0 - img.point;
        const double eta = p.squaredNorm() / (4 * t_);
        const double e = prefactor * std::exp(st - eta) / (2 * t_);
        gx.add(flip_x * e * p.x());
        gy.add(e * p.y());
        const double mag = e * p.norm();
        rounding += mag * (10 + eta + st);
        scale += mag;
      }
    };
    add_family(x - y, 1);
    if (surface_.is_klein()) add_family(x - surface_.glide(y), -1);
  }
  GradientValue out;
  out.gradient = Vec2(gx.value(), gy.value());
  out.error_bound = gradient_tail_ + 2 * kUnitRoundoff * rounding;
  out.scale = scale;
  out.terms_used = terms() * (rep_ == Representation::Image && surface_.is_klein() ? 2 : 1);
  out.representation_used = rep_;
  return out;
}

KernelValue HeatKernel::fluctuation(const Vec2& x, const Vec2& y) const {
  if (rep_ != Representation::Spectral) {
    throw Error(ErrorCode::InvalidParameter, "fluctuation needs the spectral representation");
  }
  detail::CompensatedSum sum;
  double rounding = 0;
  for (const auto& term : spectral_) {
    if (term.constant) continue;
    double rw = 0;
    sum.add(spectral_term_value(term, x, y, term.shifted_weight, rw));
    rounding += term.shifted_weight * rw;
  }
  return {sum.value(), shifted_value_tail_ + kUnitRoundoff * rounding, long(spectral_.size()) - 1,
          Representation::Spectral};
}

KernelValue HeatKernel::difference(const Vec2& x, const Vec2& y, const Vec2& z) const {
  if (rep_ != Representation::Spectral) {
    throw Error(ErrorCode::InvalidParameter, "difference needs the spectral representation");
  }
  detail::CompensatedSum sum;
  double rounding = 0;
  for (const auto& term : spectral_) {
    if (term.constant) continue;
    double rwy = 0;
    double rwz = 0;
    const double vy = spectral_term_value(term, x, y, term.shifted_weight, rwy);
    const double vz = spectral_term_value(term, x, z, term.shifted_weight, rwz);
    sum.add(vy - vz);
    rounding += term.shifted_weight * (rwy + rwz + 1);
  }
  return {sum.value(), 2 * shifted_value_tail_ + kUnitRoundoff * rounding, 2 * (long(spectral_.size()) - 1),
          Representation::Spectral};
}

KernelValue heat_kernel(const KernelQuery& q) {
  return HeatKernel(q.surface, q.t, q.epsilon, q.representation).value(q.x, q.y);
}

GradientValue heat_kernel_gradient(const KernelQuery& q) {
  return HeatKernel(q.surface, q.t, q.epsilon, q.representation).gradient(q.x, q.y);
}

// --- eigenspaces -----------------------------------------------------------

std::vector<EigenfunctionSample> eigenfunctions(const FlatSurfaced& surface, const SpectralMode& mode,
                                                const Vec2& x) {
  check_mode(surface, mode);
  std::vector<EigenfunctionSample> out;
  const double area = surface.area();
  if (surface.is_torus()) {
    for (const auto& l : mode.dual_generators) {
      if (l.isZero()) {
        out.push_back({1 / std::sqrt(area), Vec2::Zero()});
        continue;
      }
      const Vec2 k = 2 * kPi * l;
      const double c = std::sqrt(2 / area);
      const double th = k.dot(x);
      out.push_back({c * std::cos(th), -c * std::sin(th) * k});
      out.push_back({c * std::sin(th), c * std::cos(th) * k});
    }
    return out;
  }
  const double b = surface.b();
  for (const auto& g : mode.klein_generators) {
    const double k1 = 2 * kPi * g.l1;
    const double k2 = kPi * g.l2 / b;
    if (g.l1 == 0 && g.l2 == 0) {
      out.push_back({1 / std::sqrt(b), Vec2::Zero()});
      continue;
    }
    // x1 factor and its derivative
    const bool sine = g.parity == KleinParity::Sine;
    const double f = sine ? std::sin(k1 * x.x()) : std::cos(k1 * x.x());
    const double df = sine ? k1 * std::cos(k1 * x.x()) : -k1 * std::sin(k1 * x.x());
    if (g.l2 == 0) {
      const double c = std::sqrt(2 / b);
      out.push_back({c * f, Vec2(c * df, 0)});
      continue;
    }
    const double c = g.l1 == 0 ? std::sqrt(2 / b) : 2 / std::sqrt(b);
    const double cs = std::cos(k2 * x.y());
    const double sn = std::sin(k2 * x.y());
    out.push_back({c * f * cs, Vec2(c * df * cs, -c * f * k2 * sn)});
    out.push_back({c * f * sn, Vec2(c * df * sn, c * f * k2 * cs)});
  }
  return out;
}

double projection_kernel(const FlatSurfaced& surface, const SpectralMode& mode, const Vec2& x, const Vec2& y) {
  check_mode(surface, mode);
  detail::CompensatedSum sum;
  if (surface.is_torus()) {
    const double inv_area = 1 / surface.area();
    for (const auto& l : mode.dual_generators) {
      sum.add(l.isZero() ? inv_area : 2 * inv_area * std::cos(2 * kPi * l.dot(x - y)));
    }
    return sum.value();
  }
  const double b = surface.b();
  for (const auto& g : mode.klein_generators) {
    const double k1 = 2 * kPi * g.l1;
    const double k2 = kPi * g.l2 / b;
    const double xfactor = g.parity == KleinParity::Sine ? std::sin(k1 * x.x()) * std::sin(k1 * y.x())
                                                         : std::cos(k1 * x.x()) * std::cos(k1 * y.x());
    sum.add(klein_weight(g, b) * xfactor * std::cos(k2 * (x.y() - y.y())));
  }
  return sum.value();
}

GradientValue projection_gradient(const FlatSurfaced& surface, const SpectralMode& mode, const Vec2& x,
                                  const Vec2& y) {
  check_mode(surface, mode);
  detail::CompensatedSum gx;
  detail::CompensatedSum gy;
  double rounding = 0;
  double scale = 0;
  if (surface.is_torus()) {
    const double inv_area = 1 / surface.area();
    for (const auto& l : mode.dual_generators) {
      if (l.isZero()) continue;
      const Vec2 k = 2 * kPi * l;
      const double th = k.dot(x - y);
      const double s = 2 * inv_area * std::sin(th);
      gx.add(s * k.x());
      gy.add(s * k.y());
      const double mag = 2 * inv_area * k.norm();
      rounding += mag * (10 + std::abs(th));
      scale += mag;
    }
  } else {
    const double b = surface.b();
    for (const auto& g : mode.klein_generators) {
      const double k1 = 2 * kPi * g.l1;
      const double k2 = kPi * g.l2 / b;
      const double w = klein_weight(g, b);
      const double delta = x.y() - y.y();
      const double c2 = std::cos(k2 * delta);
      const double s2 = std::sin(k2 * delta);
      const bool sine = g.parity == KleinParity::Sine;
      const double fx = sine ? std::sin(k1 * x.x()) : std::cos(k1 * x.x());
      const double fy = sine ? std::sin(k1 * y.x()) : std::cos(k1 * y.x());
      const double dfy = sine ? k1 * std::cos(k1 * y.x()) : -k1 * std::sin(k1 * y.x());
      gx.add(w * fx * dfy * c2);
      gy.add(w * fx * fy * k2 * s2);
      const double mag = w * std::hypot(k1, k2);
      rounding += mag * (10 + k1 * (std::abs(x.x()) + std::abs(y.x())) + std::abs(k2 * delta));
      scale += mag;
    }
  }
  GradientValue out;
  out.gradient = Vec2(gx.value(), gy.value());
  out.error_bound = 2 * kUnitRoundoff * rounding;
  out.scale = scale;
  out.terms_used = surface.is_torus() ? long(mode.dual_generators.size()) : long(mode.klein_generators.size());
  out.representation_used = Representation::Spectral;
  return out;
}

std::vector<Vec2> fundamental_grid(const FlatSurfaced& surface, int grid) {
  if (grid < 2) throw Error(ErrorCode::InvalidParameter, "grid must be >= 2");
  std::vector<Vec2> pts;
  pts.reserve(std::size_t(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 c(double(i) / grid, double(j) / grid);
      pts.push_back(surface.is_torus() ? surface.lattice().point(c) : Vec2(c.x(), c.y() * surface.b()));
    }
  }
  return pts;
}

DiagonalScan projection_diagonal_scan(const FlatSurfaced& surface, const SpectralMode& mode, int grid) {
  DiagonalScan out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   mode.multiplicity / surface.area()};
  for (const auto& x : fundamental_grid(surface, grid)) {
    const double p = projection_kernel(surface, mode, x, x);
    out.min = std::min(out.min, p);
    out.max = std::max(out.max, p);
  }
  return out;
}

DiagonalScan gradient_sum_check(const FlatSurfaced& surface, const SpectralMode& mode, int grid) {
  DiagonalScan out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                   mode.eigenvalue * mode.multiplicity / surface.area()};
  for (const auto& x : fundamental_grid(surface, grid)) {
    double s = 0;
    for (const auto& phi : eigenfunctions(surface, mode, x)) s += phi.gradient.squaredNorm();
    out.min = std::min(out.min, s);
    out.max = std::max(out.max, s);
  }
  return out;
}

}  // namespace flatheat
