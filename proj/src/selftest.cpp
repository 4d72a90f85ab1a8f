#include "flatheat/selftest.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "flatheat/monotonicity.hpp"
#include "flatheat/pde.hpp"
#include "flatheat/spectral.hpp"

namespace flatheat {
namespace {

std::vector<FlatSurfaced> sample_surfaces() {
  return {FlatSurfaced::torus(ReducedLatticed::square()),
          FlatSurfaced::torus(ReducedLatticed::honeycomb()),
          FlatSurfaced::torus(ReducedLatticed::canonical(0, 1.5)),
          FlatSurfaced::torus(ReducedLatticed::canonical(0.3, std::sqrt(0.91))),
          FlatSurfaced::torus(ReducedLatticed::canonical(0.3, 1.2)),
          FlatSurfaced::klein(0.8),
          FlatSurfaced::klein(1.0),
          FlatSurfaced::klein(1.5)};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

SelfTestResult check(std::string name, const std::function<std::string(bool&)>& body) {
  SelfTestResult r{std::move(name), false, {}};
  try {
    r.detail = body(r.passed);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("exception: ") + e.what();
  }
  return r;
}

}  // namespace

std::vector<SelfTestResult> run_selftest() {
  std::vector<SelfTestResult> out;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> unit(0, 1);

  out.push_back(check("reduction recovers input basis", [&](bool& ok) {
    double worst = 0;
    for (int k = 0; k < 200; ++k) {
      const RawBasisd raw{Vec2(4 * unit(rng) - 2, 4 * unit(rng) - 2), Vec2(4 * unit(rng) - 2, 4 * unit(rng) - 2)};
      if (std::abs(raw.u.x() * raw.v.y() - raw.u.y() * raw.v.x()) < 1e-3) continue;
      const auto lat = reduce(raw);
      Eigen::Matrix2d in;
      in << raw.u, raw.v;
      worst = std::max(worst, (lat.reconstruct() - in).cwiseAbs().maxCoeff());
    }
    ok = worst < 1e-12;
    return "max reconstruction error " + fmt(worst);
  }));

  out.push_back(check("principal eigenvalue multiplicities", [&](bool& ok) {
    const int hc = principal_eigenvalue(FlatSurfaced::torus(ReducedLatticed::honeycomb())).multiplicity;
    const int sq = principal_eigenvalue(FlatSurfaced::torus(ReducedLatticed::square())).multiplicity;
    const int k1 = principal_eigenvalue(FlatSurfaced::klein(1.0)).multiplicity;
    ok = hc == 6 && sq == 4 && k1 == 3;
    return "honeycomb " + std::to_string(hc) + ", square " + std::to_string(sq) + ", Klein b=1 " + std::to_string(k1);
  }));

  out.push_back(check("spectral and image sums agree", [&](bool& ok) {
    ok = true;
    double worst = 0;
    const auto surfaces = sample_surfaces();
    for (int k = 0; k < 80; ++k) {
      const auto& s = surfaces[k % surfaces.size()];
      const double t = 0.01 * std::pow(1000.0, unit(rng));
      const Vec2 x(unit(rng), s.b() * unit(rng));
      const Vec2 y(unit(rng), s.b() * unit(rng));
      const auto a = HeatKernel(s, t, 1e-12, Representation::Spectral).value(x, y);
      const auto b = HeatKernel(s, t, 1e-12, Representation::Image).value(x, y);
      const double gap = std::abs(a.value - b.value);
      worst = std::max(worst, gap);
      if (gap > a.error_bound + b.error_bound) ok = false;
    }
    return "max |spectral - image| " + fmt(worst);
  }));

  out.push_back(check("kernel symmetry and positivity", [&](bool& ok) {
    ok = true;
    for (const auto& s : sample_surfaces()) {
      for (double t : {0.02, 0.3, 3.0}) {
        const HeatKernel hk(s, t);
        for (int k = 0; k < 10; ++k) {
          const Vec2 x(unit(rng), s.b() * unit(rng));
          const Vec2 y(unit(rng), s.b() * unit(rng));
          const auto kxy = hk.value(x, y);
          if (std::abs(kxy.value - hk.value(y, x).value) > 1e-13) ok = false;
          if (!(kxy.value - kxy.error_bound > 0)) ok = false;
        }
      }
    }
    return std::string(ok ? "symmetric and positive" : "failure");
  }));

  out.push_back(check("mass conservation", [&](bool& ok) {
    double worst = 0;
    for (const auto& s : sample_surfaces()) {
      const HeatKernel hk(s, 0.05);
      const int n = 128;
      double sum = 0;
      for (const auto& p : fundamental_grid(s, n)) sum += hk.value(Vec2::Zero(), p).value;
      worst = std::max(worst, std::abs(sum * s.area() / (n * n) - 1));
    }
    ok = worst < 1e-6;
    return "max |mass - 1| " + fmt(worst);
  }));

  out.push_back(check("diagonal and gradient-sum constancy on tori", [&](bool& ok) {
    ok = true;
    const auto s = FlatSurfaced::torus(ReducedLatticed::canonical(0.3, 1.2));
    for (const auto& m : enumerate_modes(s, 400)) {
      const auto d = projection_diagonal_scan(s, m, 16);
      const auto g = gradient_sum_check(s, m, 16);
      if (d.max - d.min > 1e-11 || std::abs(d.max - d.expected) > 1e-11) ok = false;
      if (std::abs(g.max - g.expected) > 1e-9 || std::abs(g.min - g.expected) > 1e-9) ok = false;
    }
    return std::string(ok ? "constant for every mode up to 400" : "non-constant mode found");
  }));

  out.push_back(check("generic counterexample", [&](bool& ok) {
    const auto r = counterexample_generic(0.3, 1.2);
    ok = r.verified && std::abs(r.s_star - 0.53125) < 1e-12;
    return "s_star " + fmt(r.s_star) + ", increase " + fmt(r.increase);
  }));

  out.push_back(check("isosceles counterexample", [&](bool& ok) {
    const auto r = counterexample_isosceles(0.3);
    ok = r.verified;
    return "z*.grad P " + fmt(r.directional_derivative);
  }));

  out.push_back(check("Klein bottle counterexamples", [&](bool& ok) {
    ok = true;
    std::string detail;
    for (double b : {0.8, 1.0, 1.5}) {
      const auto r = counterexample_klein(b, b == 1.0 ? 0.25 : 0.2);
      ok = ok && r.verified;
      detail += "b=" + fmt(b) + " " + r.regime + (r.verified ? " ok; " : " FAILED; ");
    }
    return detail;
  }));

  out.push_back(check("honeycomb scan", [&](bool& ok) {
    ScanConfig cfg;
    cfg.n_directions = 60;
    cfg.n_arc_samples = 16;
    cfg.t_values = {0.05, 1};
    const auto r = scan(FlatSurfaced::torus(ReducedLatticed::honeycomb()), KernelSelector::heat(), cfg);
    ok = r.verdict == Verdict::Monotone;
    return std::string(to_string(r.verdict)) + " over " + std::to_string(r.points_checked) + " samples";
  }));

  out.push_back(check("honeycomb critical points", [&](bool& ok) {
    const auto c = critical_point_census(FlatSurfaced::torus(ReducedLatticed::honeycomb()), 0.1, 64);
    ok = c.maxima == 1 && c.minima == 2 && c.saddles == 3;
    return std::to_string(c.maxima) + " max, " + std::to_string(c.minima) + " min, " + std::to_string(c.saddles) +
           " saddles";
  }));

  out.push_back(check("finite-difference oracle", [&](bool& ok) {
    const auto r = pde_check(ReducedLatticed::square(), 0.05, 48);
    ok = r.relative_error < 1e-2 && std::abs(r.mass - 1) < 1e-10;
    return "relative error " + fmt(r.relative_error) + " at n=48";
  }));

  return out;
}

}  // namespace flatheat
