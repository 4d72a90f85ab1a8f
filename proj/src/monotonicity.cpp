#include "flatheat/monotonicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <tuple>

#include "flatheat/parallel.hpp"

namespace flatheat {
namespace {

constexpr double kPi = std::numbers::pi;

std::vector<double> geometric_t_grid() {
  std::vector<double> ts;
  for (int k = -7; k <= 7; ++k) ts.push_back(std::ldexp(1.0, k));
  return ts;
}

double angle_of(const Vec2& u) {
  double th = std::atan2(u.y(), u.x());
  if (th < 0) th += 2 * kPi;
  if (th >= 2 * kPi) th -= 2 * kPi;
  return th;
}

struct Direction {
  double angle;
  Vec2 unit;
};

std::vector<Direction> direction_set(const FlatSurfaced& surface, int n) {
  std::vector<Direction> dirs;
  for (int k = 0; k < n; ++k) {
    const double th = 2 * kPi * k / n;
    dirs.push_back({th, Vec2(std::cos(th), std::sin(th))});
  }
  std::vector<Vec2> forced = {Vec2(1, 0), Vec2(0, 1), Vec2(-1, 0), Vec2(0, -1)};
  if (surface.is_torus()) {
    const auto cell = voronoi(surface.lattice());
    forced.insert(forced.end(), cell.relevant_vectors.begin(), cell.relevant_vectors.end());
    forced.insert(forced.end(), cell.vertices.begin(), cell.vertices.end());
  }
  for (const auto& v : forced) {
    const Vec2 u = v.normalized();
    dirs.push_back({angle_of(u), u});
  }
  // Forced directions come last so a stable sort keeps uniform angles first
  // among exact ties; dedup then keeps one of each.
  std::stable_sort(dirs.begin(), dirs.end(), [](const Direction& l, const Direction& r) { return l.angle < r.angle; });
  std::vector<Direction> out;
  for (const auto& d : dirs) {
    if (!out.empty() && d.angle - out.back().angle <= 1e-12) continue;
    out.push_back(d);
  }
  if (out.size() > 1 && out.front().angle + 2 * kPi - out.back().angle <= 1e-12) out.pop_back();
  return out;
}

std::vector<CurveSample> sample_curve(double lo, double hi, int count, const auto& value, const auto& formula) {
  std::vector<CurveSample> out;
  for (int i = 0; i < count; ++i) {
    const double s = lo + (hi - lo) * i / (count - 1);
    out.push_back({s, value(s), formula(s)});
  }
  return out;
}

double max_error(const std::vector<CurveSample>& samples) {
  double e = 0;
  for (const auto& c : samples) e = std::max(e, std::abs(c.value - c.formula));
  return e;
}

}  // namespace

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Monotone: return "Monotone";
    case Verdict::Violated: return "Violated";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Unknown";
}

std::string_view to_string(KernelKind k) { return k == KernelKind::Heat ? "heat" : "projection"; }

std::string_view to_string(CriticalKind k) {
  switch (k) {
    case CriticalKind::Maximum: return "maximum";
    case CriticalKind::Minimum: return "minimum";
    case CriticalKind::Saddle: return "saddle";
  }
  return "unknown";
}

void ScanConfig::validate() const {
  if (n_directions < 4) throw Error(ErrorCode::InvalidParameter, "n_directions must be >= 4");
  if (n_arc_samples < 8) throw Error(ErrorCode::InvalidParameter, "n_arc_samples must be >= 8");
  if (!(derivative_tolerance > 0)) throw Error(ErrorCode::InvalidParameter, "derivative_tolerance must be positive");
  if (!(kernel_epsilon > 0)) throw Error(ErrorCode::InvalidParameter, "kernel_epsilon must be positive");
  if (klein_base_grid < 1) throw Error(ErrorCode::InvalidParameter, "klein_base_grid must be >= 1");
  for (double t : t_values) {
    if (!(t > 0)) throw Error(ErrorCode::NonPositiveTime, "scan times must be positive");
  }
}

std::vector<double> ScanConfig::default_t_grid() { return geometric_t_grid(); }

std::vector<double> scan_directions(const FlatSurfaced& surface, int n_directions) {
  std::vector<double> out;
  for (const auto& d : direction_set(surface, n_directions)) out.push_back(d.angle);
  return out;
}

MonotonicityReport scan(const FlatSurfaced& surface, const KernelSelector& kernel, const ScanConfig& cfg) {
  cfg.validate();
  const bool heat = kernel.kind == KernelKind::Heat;
  if (!heat && !kernel.mode.belongs_to(surface)) {
    throw Error(ErrorCode::ModeSurfaceMismatch, "mode was enumerated for another surface");
  }

  MonotonicityReport report;
  report.config = cfg;
  report.surface_kind = surface.kind();
  report.a = surface.a();
  report.b = surface.b();
  report.kernel = kernel.kind;
  report.eigenvalue = heat ? 0 : kernel.mode.eigenvalue;

  const auto dirs = direction_set(surface, cfg.n_directions);
  for (const auto& d : dirs) report.directions.push_back(d.angle);

  std::vector<Vec2> bases = cfg.base_points;
  if (bases.empty()) {
    if (surface.is_torus()) {
      bases.push_back(Vec2::Zero());
    } else {
      const int g = cfg.klein_base_grid;
      for (int i = 0; i < g; ++i) {
        for (int j = 0; j < g; ++j) bases.emplace_back(double(i) / g, surface.b() * j / g);
      }
    }
  }
  std::vector<double> ts = heat ? (cfg.t_values.empty() ? geometric_t_grid() : cfg.t_values) : std::vector<double>{0};
  report.config.t_values = heat ? ts : std::vector<double>{};
  report.config.base_points = bases;

  const double shift = heat ? principal_eigenvalue(surface).eigenvalue : 0;
  std::vector<std::unique_ptr<HeatKernel>> main_eval(ts.size());
  std::vector<std::unique_ptr<HeatKernel>> retry_eval(ts.size());
  if (heat) {
    for (std::size_t k = 0; k < ts.size(); ++k) {
      main_eval[k] = std::make_unique<HeatKernel>(surface, ts[k], cfg.kernel_epsilon, Representation::Auto, shift);
      retry_eval[k] =
          std::make_unique<HeatKernel>(surface, ts[k], cfg.kernel_epsilon / 16, Representation::Auto, shift);
    }
  }

  // Geodesic lengths depend only on (base, direction).
  const std::size_t n_geo = bases.size() * dirs.size();
  std::vector<double> s_max(n_geo);
  parallel_for(n_geo, [&](std::size_t i) {
    s_max[i] = minimal_geodesic(surface, bases[i / dirs.size()], dirs[i % dirs.size()].unit).s_max;
  });

  struct TaskResult {
    std::vector<ViolationWitness> witnesses;
    long checked = 0;
    long inconclusive = 0;
    double max_rel = -std::numeric_limits<double>::infinity();
  };
  const std::size_t n_tasks = n_geo * ts.size();
  std::vector<TaskResult> results(n_tasks);

  parallel_for(n_tasks, [&](std::size_t task) {
    const std::size_t geo = task % n_geo;
    const std::size_t tk = task / n_geo;
    const Vec2& base = bases[geo / dirs.size()];
    const Vec2& u = dirs[geo % dirs.size()].unit;
    const double smax = s_max[geo];
    auto& out = results[task];

    auto evaluate = [&](const HeatKernel* hk, const Vec2& y) {
      return heat ? hk->gradient(base, y) : projection_gradient(surface, kernel.mode, base, y);
    };
    enum class Outcome { Ok, Violation, Undecided };
    auto judge = [&](const GradientValue& g, double& d) {
      d = u.dot(g.gradient);
      const double tau = cfg.derivative_tolerance * g.scale;
      if (d - g.error_bound > tau) return Outcome::Violation;
      if (d + g.error_bound <= tau) return Outcome::Ok;
      return Outcome::Undecided;
    };

    for (int j = 1; j <= cfg.n_arc_samples; ++j) {
      const double s = smax * j / cfg.n_arc_samples;
      const Vec2 y = base + s * u;
      GradientValue g = evaluate(main_eval[tk].get(), y);
      double d = 0;
      Outcome outcome = judge(g, d);
      if (outcome == Outcome::Undecided && heat) {
        g = evaluate(retry_eval[tk].get(), y);
        outcome = judge(g, d);
      }
      ++out.checked;
      if (g.scale > 0) out.max_rel = std::max(out.max_rel, d / g.scale);
      if (outcome == Outcome::Undecided) ++out.inconclusive;
      if (outcome == Outcome::Violation) {
        out.witnesses.push_back({base, u, s, smax, heat ? ts[tk] : 0.0, d, g.error_bound, g.scale, kernel.kind,
                                 report.eigenvalue});
      }
    }
  });

  report.max_relative_derivative = -std::numeric_limits<double>::infinity();
  for (auto& r : results) {
    report.points_checked += r.checked;
    report.inconclusive += r.inconclusive;
    report.max_relative_derivative = std::max(report.max_relative_derivative, r.max_rel);
    report.witnesses.insert(report.witnesses.end(), r.witnesses.begin(), r.witnesses.end());
  }
  std::sort(report.witnesses.begin(), report.witnesses.end(), [](const ViolationWitness& l, const ViolationWitness& r) {
    return std::make_tuple(l.t, l.base.x(), l.base.y(), angle_of(l.direction), l.s) <
           std::make_tuple(r.t, r.base.x(), r.base.y(), angle_of(r.direction), r.s);
  });
  if (!report.witnesses.empty()) {
    report.verdict = Verdict::Violated;
  } else if (report.inconclusive > 0) {
    report.verdict = Verdict::Inconclusive;
  } else {
    report.verdict = Verdict::Monotone;
  }
  return report;
}

// --- counterexamples -------------------------------------------------------

GenericCounterexample counterexample_generic(double a, double b) {
  const auto lat = ReducedLatticed::canonical(a, b);
  if (classify(lat).tag != LatticeTag::Generic || !(a > 0)) {
    throw Error(ErrorCode::WrongLatticeClass, "generic counterexample needs a generic lattice");
  }
  const auto surface = FlatSurfaced::torus(lat);
  const auto mode = principal_eigenvalue(surface);

  GenericCounterexample out;
  out.a = lat.a();
  out.b = lat.b();
  out.s_star = cut_distance(lat, Vec2(0, 1)) / out.b;
  auto P = [&](double s) { return projection_kernel(surface, mode, Vec2::Zero(), Vec2(0, s * out.b)); };
  auto formula = [&](double s) { return 2 / out.b * std::cos(2 * kPi * s); };
  out.samples = sample_curve(0.45, out.s_star, 100, P, formula);
  out.max_formula_error = max_error(out.samples);

  const auto rising = sample_curve(0.5, out.s_star, 100, P, formula);
  out.strictly_increasing = true;
  for (std::size_t i = 1; i < rising.size(); ++i) {
    if (!(rising[i].value > rising[i - 1].value)) out.strictly_increasing = false;
  }
  out.increase = rising.back().value - rising.front().value;
  out.verified = out.s_star > 0.5 && out.max_formula_error <= 1e-12 && out.strictly_increasing && out.increase > 0;
  return out;
}

IsoscelesCounterexample counterexample_isosceles(double a) {
  if (!(a > 0 && a < 0.5)) throw Error(ErrorCode::WrongLatticeClass, "isosceles counterexample needs 0 < a < 1/2");
  const double b = std::sqrt(1 - a * a);
  const auto lat = ReducedLatticed::canonical(a, b);
  if (classify(lat).tag != LatticeTag::Isosceles) {
    throw Error(ErrorCode::WrongLatticeClass, "lattice is not isosceles");
  }
  const auto surface = FlatSurfaced::torus(lat);
  const auto mode = principal_eigenvalue(surface);

  IsoscelesCounterexample out;
  out.a = a;
  out.b = b;
  // Circumcenter of O, A, B: z.A = |A|^2/2 and z.B = |B|^2/2.
  const Vec2 A(-a, b);
  const Vec2 B(1 - a, b);
  Eigen::Matrix2d sys;
  sys.row(0) = A.transpose();
  sys.row(1) = B.transpose();
  out.z_star = sys.partialPivLu().solve(Vec2(A.squaredNorm() / 2, B.squaredNorm() / 2));

  const Vec2 xi(-1 - a, b);  // long diagonal beta(s) = (1,0) + s xi
  const Vec2 eta = B;
  out.xi_dot_eta = xi.dot(eta);
  out.diagonal_parameter = out.z_star.y() / b;

  auto P = [&](double s) { return projection_kernel(surface, mode, Vec2::Zero(), Vec2(Vec2(1, 0) + s * xi)); };
  auto formula = [&](double s) { return 4 / b * std::cos(2 * kPi * s); };
  out.diagonal = sample_curve(0.0, 1.0, 100, P, formula);
  out.max_formula_error = max_error(out.diagonal);

  const auto g = projection_gradient(surface, mode, Vec2::Zero(), out.z_star);
  out.directional_derivative = out.z_star.dot(g.gradient);
  out.error_bound = out.z_star.norm() * g.error_bound;
  out.verified = out.directional_derivative > 10 * out.error_bound && out.directional_derivative > 0 &&
                 out.max_formula_error <= 1e-12 && std::abs(out.xi_dot_eta) <= 1e-14;
  return out;
}

AsymptoticViolation asymptotic_violation(const FlatSurfaced& surface, double epsilon) {
  const auto mode = principal_eigenvalue(surface);
  if (mode.multiplicity != 1) {
    throw Error(ErrorCode::NotSimple, "principal eigenvalue has multiplicity " + std::to_string(mode.multiplicity));
  }
  auto phi = [&](const Vec2& p) { return eigenfunctions(surface, mode, p).front().value; };

  AsymptoticViolation out;
  out.eigenvalue = mode.eigenvalue;
  out.x = Vec2(0.2, 0);
  out.y = Vec2(0.05, 0);
  if (!(0 < phi(out.x) && phi(out.x) < phi(out.y))) {
    // y at the largest sample of phi, x where phi is closest to half of it.
    const auto grid = fundamental_grid(surface, 32);
    out.y = *std::max_element(grid.begin(), grid.end(), [&](const Vec2& l, const Vec2& r) { return phi(l) < phi(r); });
    const double half = phi(out.y) / 2;
    out.x = *std::min_element(grid.begin(), grid.end(), [&](const Vec2& l, const Vec2& r) {
      return std::abs(phi(l) - half) < std::abs(phi(r) - half);
    });
  }
  out.phi_x = phi(out.x);
  out.phi_y = phi(out.y);

  for (double t : geometric_t_grid()) {
    const HeatKernel hk(surface, t, epsilon, Representation::Spectral, mode.eigenvalue);
    const auto r = hk.difference(out.x, out.y, out.x);
    out.samples.push_back({t, r.value, r.error_bound});
    if (!out.found && r.value - r.error_bound > 0) {
      out.found = true;
      out.t_threshold = t;
      out.difference = r.value;
      out.error_bound = r.error_bound;
      const HeatKernel tight(surface, t, epsilon / 4, Representation::Spectral, mode.eigenvalue);
      const auto r4 = tight.difference(out.x, out.y, out.x);
      out.revalidated = r4.value - r4.error_bound > 0;
    }
  }
  return out;
}

KleinCounterexample counterexample_klein(double b, double xi) {
  if (!(b > 0) || !std::isfinite(b)) throw Error(ErrorCode::InvalidParameter, "b must be positive");
  if (!(xi > 0 && xi < 0.5)) throw Error(ErrorCode::InvalidParameter, "xi must lie in (0, 1/2)");
  const auto surface = FlatSurfaced::klein(b);
  const auto mode = principal_eigenvalue(surface);

  KleinCounterexample out;
  out.b = b;
  out.xi = xi;
  out.eigenvalue = mode.eigenvalue;
  out.multiplicity = mode.multiplicity;
  if (mode.multiplicity == 1) {
    out.regime = "asymptotic";
    out.asymptotic = asymptotic_violation(surface);
    out.verified = out.asymptotic.found && out.asymptotic.revalidated;
    return out;
  }

  out.regime = mode.multiplicity == 3 ? "multiplicity-3" : "multiplicity-2";
  const Vec2 base(xi, 0);
  const Vec2 u(0, 1);
  out.s_star = minimal_geodesic(surface, base, u).s_max;
  auto P = [&](double s) { return projection_kernel(surface, mode, base, Vec2(base + s * u)); };
  auto formula = [&](double s) {
    if (mode.multiplicity == 3) {
      const double c = std::cos(2 * kPi * xi);
      return 2 * c * c + 2 * std::cos(2 * kPi * s);
    }
    return 2 / b * std::cos(2 * kPi * s / b);
  };
  out.samples = sample_curve(0.0, out.s_star, 100, P, formula);
  out.max_formula_error = max_error(out.samples);
  out.increase = P(out.s_star) - P(b / 2);

  out.witness_s = (b / 2 + out.s_star) / 2;
  const Vec2 y = base + out.witness_s * u;
  out.witness_derivative = u.dot(projection_gradient(surface, mode, base, y).gradient);

  bool heat_found = false;
  for (double t : geometric_t_grid()) {
    const HeatKernel hk(surface, t, 1e-12, Representation::Auto, mode.eigenvalue);
    const auto g = hk.gradient(base, y);
    const double d = u.dot(g.gradient);
    if (d - g.error_bound <= 0) continue;
    const HeatKernel tight(surface, t, 0.25e-12, Representation::Auto, mode.eigenvalue);
    const auto g4 = tight.gradient(base, y);
    if (u.dot(g4.gradient) - g4.error_bound <= 0) continue;
    heat_found = true;
    out.heat_t = t;
    out.heat_derivative = d;
    out.heat_error_bound = g.error_bound;
    break;
  }
  out.verified = out.s_star > b / 2 && out.max_formula_error <= 1e-12 && out.increase > 0 &&
                 out.witness_derivative > 0 && heat_found;
  return out;
}

// --- critical points -------------------------------------------------------

CriticalCensus critical_point_census(const FlatSurfaced& surface, double t, int grid) {
  if (!surface.is_torus()) throw Error(ErrorCode::InvalidParameter, "census is defined for tori");
  if (grid < 64) throw Error(ErrorCode::InvalidParameter, "census grid must be >= 64");
  const auto& lat = surface.lattice();
  const double shift = principal_eigenvalue(surface).eigenvalue;
  const HeatKernel hk(surface, t, 1e-13, Representation::Auto, shift);
  const Vec2 origin = Vec2::Zero();
  auto grad = [&](const Vec2& y) { return hk.gradient(origin, y).gradient; };

  // Nodes sit at half-integer lattice coordinates so that the symmetric
  // critical points fall inside cells rather than on nodes.
  auto node = [&](int i, int j) { return lat.point(Vec2((i + 0.5) / grid, (j + 0.5) / grid)); };
  std::vector<Vec2> g(std::size_t(grid) * grid);
  parallel_for(std::size_t(grid), [&](std::size_t i) {
    for (int j = 0; j < grid; ++j) g[i * grid + j] = grad(node(int(i), j));
  });
  auto at = [&](int i, int j) -> const Vec2& { return g[std::size_t(i % grid) * grid + (j % grid)]; };

  const double h = 1e-5;
  auto hessian = [&](const Vec2& y) {
    Eigen::Matrix2d H;
    H.col(0) = (grad(y + Vec2(h, 0)) - grad(y - Vec2(h, 0))) / (2 * h);
    H.col(1) = (grad(y + Vec2(0, h)) - grad(y - Vec2(0, h))) / (2 * h);
    return Eigen::Matrix2d(0.5 * (H + H.transpose()));
  };

  std::vector<CriticalPoint> found;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const Vec2 c[4] = {at(i, j), at(i + 1, j), at(i, j + 1), at(i + 1, j + 1)};
      bool straddles = true;
      for (int k = 0; k < 2; ++k) {
        double lo = c[0][k];
        double hi = c[0][k];
        for (const auto& v : c) {
          lo = std::min(lo, v[k]);
          hi = std::max(hi, v[k]);
        }
        if (!(lo <= 0 && hi >= 0)) straddles = false;
      }
      if (!straddles) continue;

      Vec2 y = lat.point(Vec2(double(i + 1) / grid, double(j + 1) / grid));
      bool converged = false;
      for (int it = 0; it < 50; ++it) {
        const Eigen::Matrix2d H = hessian(y);
        if (H.determinant() == 0) break;
        const Vec2 step = H.partialPivLu().solve(grad(y));
        y -= step;
        if (step.norm() < 1e-12) {
          converged = true;
          break;
        }
      }
      if (!converged) continue;
      y = voronoi_representative(lat, y);
      bool duplicate = false;
      for (const auto& p : found) {
        if (torus_distance(lat, p.position, y) < 1e-6) duplicate = true;
      }
      if (duplicate) continue;

      const Eigen::Matrix2d H = hessian(y);
      const double det = H.determinant();
      if (std::abs(det) < 1e-10) {
        throw Error(ErrorCode::DegenerateCritical, "degenerate critical point of the heat kernel");
      }
      CriticalKind kind = CriticalKind::Saddle;
      if (det > 0) kind = H.trace() < 0 ? CriticalKind::Maximum : CriticalKind::Minimum;
      found.push_back({y, kind, det});
    }
  }

  std::sort(found.begin(), found.end(), [](const CriticalPoint& l, const CriticalPoint& r) {
    return std::make_tuple(int(l.kind), l.position.x(), l.position.y()) <
           std::make_tuple(int(r.kind), r.position.x(), r.position.y());
  });
  CriticalCensus out;
  for (const auto& p : found) {
    if (p.kind == CriticalKind::Maximum) ++out.maxima;
    if (p.kind == CriticalKind::Minimum) ++out.minima;
    if (p.kind == CriticalKind::Saddle) ++out.saddles;
  }
  out.index_sum = out.maxima + out.minima - out.saddles;
  out.points = std::move(found);
  return out;
}

}  // namespace flatheat
