#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "flatheat/monotonicity.hpp"

using namespace flatheat;
using std::numbers::pi;

namespace {

ScanConfig small_config(std::vector<double> ts, int dirs = 90, int samples = 24) {
  ScanConfig cfg;
  cfg.n_directions = dirs;
  cfg.n_arc_samples = samples;
  cfg.t_values = std::move(ts);
  return cfg;
}

Vec2 unit(double angle) { return Vec2(std::cos(angle), std::sin(angle)); }

struct GridCensus {
  int maxima = 0, minima = 0, saddles = 0;
};

// Discrete census of K_t(0, .) on an n x n periodic grid in lattice
// coordinates, shifted off the symmetry points. Extrema compare against the 8
// neighbours; saddles are nodes whose neighbour ring changes sign at least 4
// times, clustered so nearby detections count once. An extremum lying between
// nodes also upsets the rings of its neighbours, so candidates within a few
// cells of a discrete extremum are dropped.
GridCensus brute_census(const FlatSurfaced& s, double t, int n) {
  const auto& lat = s.lattice();
  const HeatKernel hk(s, t, 1e-13, Representation::Spectral, principal_eigenvalue(s).eigenvalue);
  const double off = 0.5 * (std::sqrt(2.0) - 1);
  Eigen::MatrixXd f(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      f(i, j) = hk.fluctuation(Vec2::Zero(), lat.point(Vec2((i + off) / n, (j + off) / n))).value;
  const int ring[8][2] = {{1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}, {0, -1}, {1, -1}};
  GridCensus c;
  std::vector<std::pair<int, int>> saddle_nodes, extrema;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double diff[8];
      for (int k = 0; k < 8; ++k) diff[k] = f((i + ring[k][0] + n) % n, (j + ring[k][1] + n) % n) - f(i, j);
      const bool all_below = std::all_of(diff, diff + 8, [](double d) { return d < 0; });
      const bool all_above = std::all_of(diff, diff + 8, [](double d) { return d > 0; });
      if (all_below) ++c.maxima;
      if (all_above) ++c.minima;
      if (all_below || all_above) extrema.push_back({i, j});
      int changes = 0;
      for (int k = 0; k < 8; ++k) changes += (diff[k] > 0) != (diff[(k + 1) % 8] > 0);
      if (changes >= 4) saddle_nodes.push_back({i, j});
    }
  }
  auto near = [n](std::pair<int, int> p, std::pair<int, int> q) {
    int di = std::abs(p.first - q.first);
    int dj = std::abs(p.second - q.second);
    return std::min(di, n - di) <= 3 && std::min(dj, n - dj) <= 3;
  };
  std::vector<bool> used(saddle_nodes.size(), false);
  for (std::size_t a = 0; a < saddle_nodes.size(); ++a) {
    for (const auto& e : extrema)
      if (near(saddle_nodes[a], e)) used[a] = true;
  }
  for (std::size_t a = 0; a < saddle_nodes.size(); ++a) {
    if (used[a]) continue;
    ++c.saddles;
    used[a] = true;
    for (std::size_t b = a + 1; b < saddle_nodes.size(); ++b)
      if (near(saddle_nodes[a], saddle_nodes[b])) used[b] = true;
  }
  return c;
}

}  // namespace

TEST_CASE("ScanConfig: validation and defaults") {
  ScanConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  const auto grid = ScanConfig::default_t_grid();
  REQUIRE(grid.size() == 15);
  CHECK(grid.front() == 1.0 / 128);
  CHECK(grid.back() == 128.0);
  for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] == 2 * grid[i - 1]);

  auto bad = [](auto mutate, ErrorCode code = ErrorCode::InvalidParameter) {
    ScanConfig c;
    mutate(c);
    try {
      c.validate();
    } catch (const Error& e) {
      return e.code() == code;
    }
    return false;
  };
  CHECK(bad([](ScanConfig& c) { c.n_directions = 3; }));
  CHECK(bad([](ScanConfig& c) { c.n_arc_samples = 7; }));
  CHECK(bad([](ScanConfig& c) { c.t_values = {1.0, -1.0}; }, ErrorCode::NonPositiveTime));
  CHECK(bad([](ScanConfig& c) { c.derivative_tolerance = 0; }));
  CHECK(bad([](ScanConfig& c) { c.kernel_epsilon = -1; }));
}

TEST_CASE("scan_directions: uniform angles plus forced axes") {
  const auto hc = FlatSurfaced::torus(ReducedLatticed::honeycomb());
  const auto dirs = scan_directions(hc, 12);
  CHECK(dirs.size() >= 12);
  CHECK(std::is_sorted(dirs.begin(), dirs.end()));
  auto has = [&](double angle) {
    return std::any_of(dirs.begin(), dirs.end(), [&](double d) { return std::abs(d - angle) < 1e-12; });
  };
  CHECK(has(0));
  CHECK(has(pi / 2));
  CHECK(has(pi / 6));  // hexagon vertex
  CHECK(has(pi / 3));  // relevant vector
  for (double d : dirs) {
    CHECK(d >= 0);
    CHECK(d < 2 * pi);
  }
  const auto gen = scan_directions(FlatSurfaced::torus(ReducedLatticed::canonical(0.3, 1.2)), 7);
  CHECK(std::any_of(gen.begin(), gen.end(), [](double d) { return std::abs(d - pi / 2) < 1e-12; }));
}

TEST_CASE("scan: honeycomb heat kernel is monotone") {
  const auto hc = FlatSurfaced::torus(ReducedLatticed::honeycomb());
  ScanConfig cfg;
  cfg.t_values = {0.01, 0.1, 1, 10};
  const auto r = scan(hc, KernelSelector::heat(), cfg);
  CHECK(r.verdict == Verdict::Monotone);
  CHECK(r.witnesses.empty());
  CHECK(r.inconclusive == 0);
  CHECK(r.points_checked >= 4L * 360 * 64);
  CHECK(r.max_relative_derivative <= cfg.derivative_tolerance);
}

TEST_CASE("scan: honeycomb soundness across t in [0.01, 10]") {
  const auto hc = FlatSurfaced::torus(ReducedLatticed::honeycomb());
  std::vector<double> ts;
  for (double t = 0.01; t <= 10; t *= 1.6) ts.push_back(t);
  const auto r = scan(hc, KernelSelector::heat(), small_config(ts, 120, 32));
  CHECK(r.witnesses.empty());
  CHECK(r.verdict == Verdict::Monotone);
}

TEST_CASE("scan: rectangular tori are monotone") {
  for (double b : {1.0, 1.5, 2.0}) {
    const auto s = FlatSurfaced::torus(ReducedLatticed::canonical(0, b));
    const auto r = scan(s, KernelSelector::heat(), small_config({0.1, 1.0, 10.0}, 90, 32));
    CHECK(r.verdict == Verdict::Monotone);
  }
  const auto r15 = scan(FlatSurfaced::torus(ReducedLatticed::canonical(0, 1.5)), KernelSelector::heat(),
                        small_config({1.0}, 360, 64));
  CHECK(r15.verdict == Verdict::Monotone);
}

TEST_CASE("scan: generic projection kernel is violated on the vertical direction") {
  const double a = 0.3, b = 1.2;
  const auto s = FlatSurfaced::torus(ReducedLatticed::canonical(a, b));
  const auto mode = principal_eigenvalue(s);
  const double s_star = (a * a + b * b) / (2 * b);
  for (int dirs : {90, 120, 360}) {
    const auto r = scan(s, KernelSelector::projection(mode), small_config({}, dirs, 64));
    CHECK(r.verdict == Verdict::Violated);
    CHECK(r.kernel == KernelKind::Projection);
    const auto vertical = std::find_if(r.witnesses.begin(), r.witnesses.end(), [&](const ViolationWitness& w) {
      return (w.direction - Vec2(0, 1)).norm() < 1e-12;
    });
    REQUIRE(vertical != r.witnesses.end());
    CHECK(vertical->s > b / 2);
    CHECK(vertical->s <= s_star + 1e-12);
    CHECK(vertical->s_max == doctest::Approx(s_star).epsilon(1e-14));
  }
}

TEST_CASE("scan: witnesses are valid and survive a tighter epsilon") {
  const auto s = FlatSurfaced::torus(ReducedLatticed::canonical(0.3, 1.2));
  const auto cfg = small_config({2.0, 8.0, 32.0}, 60, 24);
  const auto r = scan(s, KernelSelector::heat(), cfg);
  REQUIRE(r.verdict == Verdict::Violated);
  REQUIRE(!r.witnesses.empty());
  const double shift = principal_eigenvalue(s).eigenvalue;
  for (const auto& w : r.witnesses) {
    CHECK(w.s > 0);
    CHECK(w.s <= w.s_max);
    CHECK(w.s_max == doctest::Approx(minimal_geodesic(s, w.base, w.direction).s_max).epsilon(1e-13));
    CHECK(w.radial_derivative - w.error_bound > cfg.derivative_tolerance * w.scale);
    const HeatKernel tight(s, w.t, cfg.kernel_epsilon / 4, Representation::Auto, shift);
    const auto g = tight.gradient(w.base, Vec2(w.base + w.s * w.direction));
    const double d = w.direction.dot(g.gradient);
    CHECK(d - g.error_bound > cfg.derivative_tolerance * g.scale);
  }
  // ordering is deterministic
  for (std::size_t i = 1; i < r.witnesses.size(); ++i) CHECK(r.witnesses[i - 1].t <= r.witnesses[i].t);
  const auto again = scan(s, KernelSelector::heat(), cfg);
  REQUIRE(again.witnesses.size() == r.witnesses.size());
  for (std::size_t i = 0; i < r.witnesses.size(); ++i) {
    CHECK(again.witnesses[i].radial_derivative == r.witnesses[i].radial_derivative);
    CHECK(again.witnesses[i].s == r.witnesses[i].s);
  }
}

TEST_CASE("scan: projection is monotone where heat is monotone at large t") {
  for (const auto& s : {FlatSurfaced::torus(ReducedLatticed::honeycomb()),
                        FlatSurfaced::torus(ReducedLatticed::canonical(0, 1.5)),
                        FlatSurfaced::torus(ReducedLatticed::square())}) {
    const auto heat = scan(s, KernelSelector::heat(), small_config({16.0, 32.0, 64.0, 128.0}, 90, 32));
    REQUIRE(heat.verdict == Verdict::Monotone);
    const auto proj = scan(s, KernelSelector::projection(principal_eigenvalue(s)), small_config({}, 90, 32));
    CHECK(proj.verdict == Verdict::Monotone);
  }
}

TEST_CASE("scan: Klein bottle heat scan on a base grid") {
  ScanConfig cfg = small_config({1.0}, 24, 16);
  cfg.klein_base_grid = 4;
  const auto r = scan(FlatSurfaced::klein(1.5), KernelSelector::heat(), cfg);
  CHECK(r.surface_kind == SurfaceKind::KleinBottle);
  CHECK(r.verdict == Verdict::Violated);
  for (const auto& w : r.witnesses) CHECK(w.s <= w.s_max);
}

TEST_CASE("counterexample_generic") {
  const auto r = counterexample_generic(0.3, 1.2);
  CHECK(r.s_star == doctest::Approx(0.53125).epsilon(1e-14));
  CHECK(r.max_formula_error < 1e-12);
  CHECK(r.strictly_increasing);
  CHECK(r.verified);
  CHECK(r.samples.front().s == doctest::Approx(0.45));
  CHECK(r.samples.back().s == doctest::Approx(r.s_star));

  const auto r2 = counterexample_generic(0.5, 1.1);
  const double s2 = (0.25 + 1.21) / (2 * 1.21);
  CHECK(r2.s_star == doctest::Approx(s2).epsilon(1e-14));
  CHECK(r2.increase == doctest::Approx(2 / 1.1 * (std::cos(2 * pi * s2) - std::cos(pi))).epsilon(1e-12));
  CHECK(r2.increase > 0);

  const auto r3 = counterexample_generic(0.01, 2.0);
  CHECK(r3.s_star - 0.5 == doctest::Approx(0.0001 / 8).epsilon(1e-6));
  CHECK(r3.increase > 0);
  CHECK(r3.increase < r2.increase);

  for (auto [a, b] : {std::pair{0.0, 1.5}, {0.3, std::sqrt(0.91)}, {0.5, std::sqrt(3.0) / 2}}) {
    try {
      counterexample_generic(a, b);
      FAIL("expected WrongLatticeClass");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::WrongLatticeClass);
    }
  }
}

TEST_CASE("counterexample_isosceles") {
  for (double a : {0.1, 0.3, 0.45, 0.49}) {
    const double b = std::sqrt(1 - a * a);
    const auto r = counterexample_isosceles(a);
    // circumcentre of O, A = (-a, b), B = (1 - a, b)
    Eigen::Matrix2d m;
    m << -a, b, 1 - a, b;
    const Vec2 rhs(0.5 * (a * a + b * b), 0.5 * ((1 - a) * (1 - a) + b * b));
    const Vec2 z = m.inverse() * rhs;
    CHECK((r.z_star - z).norm() < 1e-12);
    CHECK(r.z_star.norm() == doctest::Approx((r.z_star - Vec2(-a, b)).norm()).epsilon(1e-12));
    CHECK(r.max_formula_error < 1e-12);
    CHECK(r.directional_derivative > 0);
    CHECK(r.xi_dot_eta == doctest::Approx(0).epsilon(1e-15));
    CHECK(std::abs(r.xi_dot_eta) < 1e-15);
    CHECK(r.verified);
  }
  // z*.grad P from central differences of the closed-form kernel
  for (double a : {0.1, 0.3, 0.49}) {
    const double b = std::sqrt(1 - a * a);
    auto p = [&](const Vec2& y) {
      return 2 / b * (std::cos(2 * pi * y.y() / b) + std::cos(2 * pi * (b * y.x() + a * y.y()) / b));
    };
    const auto r = counterexample_isosceles(a);
    const double h = 1e-6;
    const Vec2 z = r.z_star;
    const Vec2 g((p(z + Vec2(h, 0)) - p(z - Vec2(h, 0))) / (2 * h), (p(z + Vec2(0, h)) - p(z - Vec2(0, h))) / (2 * h));
    CHECK(r.directional_derivative == doctest::Approx(z.dot(g)).epsilon(1e-7));
  }
  for (double a : {0.0, 0.5, -0.1, 0.7}) CHECK_THROWS_AS(counterexample_isosceles(a), Error);
}

TEST_CASE("asymptotic_violation") {
  const auto k08 = asymptotic_violation(FlatSurfaced::klein(0.8));
  CHECK(k08.found);
  CHECK((k08.x - Vec2(0.2, 0)).norm() < 1e-15);
  CHECK((k08.y - Vec2(0.05, 0)).norm() < 1e-15);
  CHECK(k08.phi_x > 0);
  CHECK(k08.phi_y > k08.phi_x);
  CHECK(k08.phi_x == doctest::Approx(std::sqrt(2 / 0.8) * std::cos(2 * pi * 0.2)).epsilon(1e-14));
  CHECK(k08.revalidated);

  const auto k05 = asymptotic_violation(FlatSurfaced::klein(0.5));
  CHECK(k05.found);
  CHECK(k05.t_threshold > 0);
  CHECK(k05.difference - k05.error_bound > 0);
  CHECK(k05.revalidated);
  // below the threshold every sampled difference was not certified positive
  for (const auto& smp : k05.samples)
    if (smp.t < k05.t_threshold) CHECK(!(smp.difference - smp.error_bound > 0));

  for (const auto& s : {FlatSurfaced::torus(ReducedLatticed::square()),
                        FlatSurfaced::torus(ReducedLatticed::canonical(0.3, 1.2)), FlatSurfaced::klein(1.5),
                        FlatSurfaced::klein(1.0)}) {
    try {
      asymptotic_violation(s);
      FAIL("expected NotSimple");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NotSimple);
    }
  }
}

TEST_CASE("counterexample_klein") {
  const auto r15 = counterexample_klein(1.5, 0.2);
  CHECK(r15.regime == "multiplicity-2");
  CHECK(r15.s_star == doctest::Approx(minimal_geodesic(FlatSurfaced::klein(1.5), Vec2(0.2, 0), Vec2(0, 1)).s_max));
  CHECK(r15.s_star > 0.75);
  CHECK(r15.max_formula_error < 1e-12);
  CHECK(r15.increase == doctest::Approx(2 / 1.5 * (std::cos(2 * pi * r15.s_star / 1.5) - std::cos(pi))).epsilon(1e-12));
  CHECK(r15.witness_derivative > 0);
  CHECK(r15.heat_derivative - r15.heat_error_bound > 0);
  CHECK(r15.verified);

  const auto r1 = counterexample_klein(1.0, 0.25);
  CHECK(r1.regime == "multiplicity-3");
  CHECK(r1.multiplicity == 3);
  CHECK(r1.s_star == doctest::Approx(0.625).epsilon(1e-11));
  for (const auto& smp : r1.samples) CHECK(std::abs(smp.value - 2 * std::cos(2 * pi * smp.s)) < 1e-12);
  CHECK(r1.verified);

  const auto r08 = counterexample_klein(0.8, 0.2);
  CHECK(r08.regime == "asymptotic");
  CHECK(r08.asymptotic.found);
  CHECK(r08.asymptotic.phi_x > 0);
  CHECK(r08.asymptotic.phi_y > r08.asymptotic.phi_x);
  CHECK(r08.verified);

  for (auto [b, xi] : {std::pair{0.0, 0.2}, {1.0, 0.0}, {1.0, 0.5}, {-1.0, 0.2}}) {
    try {
      counterexample_klein(b, xi);
      FAIL("expected InvalidParameter");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidParameter);
    }
  }
}

TEST_CASE("critical_point_census: examples") {
  const auto hc = critical_point_census(FlatSurfaced::torus(ReducedLatticed::honeycomb()), 0.2, 64);
  CHECK(hc.maxima == 1);
  CHECK(hc.minima == 2);
  CHECK(hc.saddles == 3);
  CHECK(hc.index_sum == 0);
  CHECK(hc.points.size() == 6);

  const auto sq = critical_point_census(FlatSurfaced::torus(ReducedLatticed::square()), 0.2, 64);
  CHECK(sq.maxima == 1);
  CHECK(sq.minima == 1);
  CHECK(sq.saddles == 2);
  CHECK(sq.index_sum == 0);
  for (const auto& p : sq.points) {
    const Vec2 q = p.position.cwiseAbs();
    if (p.kind == CriticalKind::Maximum) CHECK(q.norm() < 1e-8);
    if (p.kind == CriticalKind::Minimum) CHECK((q - Vec2(0.5, 0.5)).norm() < 1e-8);
  }
  CHECK_THROWS_AS(critical_point_census(FlatSurfaced::torus(ReducedLatticed::square()), 0.2, 32), Error);
  CHECK_THROWS_AS(critical_point_census(FlatSurfaced::klein(1.0), 0.2, 64), Error);
}

TEST_CASE("critical_point_census: brute-force grid oracle and index sum") {
  for (const auto& s : {FlatSurfaced::torus(ReducedLatticed::honeycomb()), FlatSurfaced::torus(ReducedLatticed::square()),
                        FlatSurfaced::torus(ReducedLatticed::canonical(0.3, 1.2)),
                        FlatSurfaced::torus(ReducedLatticed::canonical(0, 1.5))}) {
    for (double t : {0.05, 0.2, 1.0}) {
      const auto c = critical_point_census(s, t, 64);
      const auto g = brute_census(s, t, 240);
      CHECK(c.maxima == g.maxima);
      CHECK(c.minima == g.minima);
      CHECK(c.saddles == g.saddles);
      CHECK(c.index_sum == 0);
      CHECK(c.index_sum == c.maxima + c.minima - c.saddles);
    }
  }
}

TEST_CASE("critical_point_census: stable under grid refinement") {
  for (const auto& s : {FlatSurfaced::torus(ReducedLatticed::honeycomb()),
                        FlatSurfaced::torus(ReducedLatticed::canonical(0.3, 1.2))}) {
    const auto c256 = critical_point_census(s, 0.2, 256);
    const auto c512 = critical_point_census(s, 0.2, 512);
    CHECK(c256.maxima == c512.maxima);
    CHECK(c256.minima == c512.minima);
    CHECK(c256.saddles == c512.saddles);
  }
}

TEST_CASE("critical_point_census: flat kernels are degenerate") {
  try {
    critical_point_census(FlatSurfaced::torus(ReducedLatticed::square()), 0.002, 64);
    FAIL("expected DegenerateCritical");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateCritical);
  }
}
