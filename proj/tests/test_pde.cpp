#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "flatheat/pde.hpp"

using namespace flatheat;
using Eigen::Vector2d;

TEST_CASE("laplacian_coefficients: examples") {
  const auto sq = laplacian_coefficients(ReducedLatticed::square());
  CHECK(sq.g11 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(sq.g22 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::abs(sq.g12) < 1e-15);

  const auto hc = laplacian_coefficients(ReducedLatticed::honeycomb());
  CHECK(hc.g11 == doctest::Approx(4.0 / 3).epsilon(1e-14));
  CHECK(hc.g12 == doctest::Approx(2.0 / 3).epsilon(1e-14));
  CHECK(hc.g22 == doctest::Approx(4.0 / 3).epsilon(1e-14));

  const auto r2 = laplacian_coefficients(ReducedLatticed::canonical(0, 2));
  CHECK(r2.g11 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(r2.g22 == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(r2.g12) < 1e-15);

  // inverse of the Gram matrix for a generic lattice
  const auto lat = ReducedLatticed::canonical(0.3, 1.2);
  const auto c = laplacian_coefficients(lat);
  Eigen::Matrix2d gram = lat.basis().transpose() * lat.basis();
  Eigen::Matrix2d inv;
  inv << c.g11, c.g12, c.g12, c.g22;
  CHECK((gram * inv - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("stable_time_step: bound") {
  const auto hc = ReducedLatticed::honeycomb();
  const auto c = laplacian_coefficients(hc);
  const int n = 40;
  CHECK(stable_time_step(hc, n) ==
        doctest::Approx(1.0 / (n * n) / (2 * (c.g11 + c.g22 + 2 * std::abs(c.g12)))).epsilon(1e-15));
}

TEST_CASE("evolve: constant field is an equilibrium") {
  for (const auto& lat : {ReducedLatticed::square(), ReducedLatticed::honeycomb(), ReducedLatticed::canonical(0.3, 1.2)}) {
    const auto out = evolve(constant_initial(lat, 32, 2.5), 0.05);
    CHECK(out.time == doctest::Approx(0.05).epsilon(1e-15));
    CHECK((out.field.array() - 2.5).abs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("evolve: Gaussian matches the smoothed analytic kernel") {
  const auto r = pde_check(ReducedLatticed::square(), 0.1, 256);
  CHECK(r.sigma == doctest::Approx(4.0 / 256));
  CHECK(r.relative_error <= 0.01);
  CHECK(std::abs(r.mass - 1) < 1e-10);
  CHECK(r.steps > 0);

  const auto h = pde_check(ReducedLatticed::honeycomb(), 0.05, 96);
  CHECK(h.relative_error <= 0.01);
}

TEST_CASE("evolve: second-order convergence") {
  const auto study = convergence_study(ReducedLatticed::square(), 0.1, {64, 128, 256});
  REQUIRE(study.runs.size() == 3);
  for (std::size_t i = 1; i < study.runs.size(); ++i) {
    const double ratio = study.runs[i - 1].relative_error / study.runs[i].relative_error;
    CHECK(ratio > 3.5);
    CHECK(ratio < 4.5);
  }
  CHECK(study.order == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("evolve: mass is conserved over 1e4 steps") {
  for (const auto& lat : {ReducedLatticed::honeycomb(), ReducedLatticed::canonical(0.3, 1.2)}) {
    auto sol = gaussian_initial(lat, 48, 0.05);
    const double m0 = sol.mass();
    CHECK(m0 == doctest::Approx(1.0).epsilon(1e-10));
    const auto out = evolve(sol, 1e4 * sol.dt);
    CHECK(std::abs(out.mass() - 1) < 1e-8);
    CHECK(out.field.allFinite());
  }
}

TEST_CASE("evolve: unstable step is refused") {
  const auto lat = ReducedLatticed::canonical(0.3, 1.2);
  const double bound = stable_time_step(lat, 32);
  auto sol = gaussian_initial(lat, 32, 0.1, 1.01 * bound);
  try {
    evolve(sol, 0.01);
    FAIL("expected UnstableStep");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnstableStep);
  }
  CHECK_NOTHROW(evolve(gaussian_initial(lat, 32, 0.1, bound), 0.01));
}

TEST_CASE("radial_derivative_field: honeycomb is strictly decreasing inside the hexagon") {
  const auto lat = ReducedLatticed::honeycomb();
  const int n = 96;
  const auto sol = evolve(gaussian_initial(lat, n, 4.0 / n), 0.05);
  const auto f = radial_derivative_field(sol);
  const auto cell = voronoi(lat);
  const double h = 1.0 / n;
  int checked = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vector2d x = voronoi_representative(lat, sol.node(i, j));
      if (x.norm() < 3 * h) continue;
      if (cell.excess(x) > -1e-12) continue;  // boundary of C
      bool near_vertex = false;
      for (const auto& v : cell.vertices) near_vertex = near_vertex || (x - v).norm() < 3 * h;
      if (near_vertex) continue;
      CHECK(f(i, j) < 0);
      ++checked;
    }
  }
  CHECK(checked > n * n / 2);
}

TEST_CASE("radial_derivative_field: square torus and initial data") {
  const auto sq = ReducedLatticed::square();
  const int n = 64;
  const auto sol = evolve(gaussian_initial(sq, n, 4.0 / n), 0.05);
  const auto f = radial_derivative_field(sol);
  const double tol = 1e-12 * f.cwiseAbs().maxCoeff();
  const auto cell = voronoi(sq);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (cell.excess(voronoi_representative(sq, sol.node(i, j))) < -1e-12) CHECK(f(i, j) <= tol);

  for (const auto& lat : {sq, ReducedLatticed::honeycomb()}) {
    const auto init = gaussian_initial(lat, n, 4.0 / n);
    CHECK(init.time == 0);
    const auto f0 = radial_derivative_field(init);
    const double tol0 = 1e-12 * f0.cwiseAbs().maxCoeff();
    const auto c = voronoi(lat);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (c.excess(voronoi_representative(lat, init.node(i, j))) < -1e-12) CHECK(f0(i, j) <= tol0);
  }
}

TEST_CASE("evolve: honeycomb reflection symmetry is preserved") {
  const auto lat = ReducedLatticed::honeycomb();
  const int n = 60;
  const auto sol = evolve(gaussian_initial(lat, n, 4.0 / n), 0.03);
  double swap = 0, flip = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      swap = std::max(swap, std::abs(sol.field(i, j) - sol.field(j, i)));
      flip = std::max(flip, std::abs(sol.field(i, j) - sol.field((n - j) % n, (n - i) % n)));
    }
  }
  CHECK(swap < 1e-11);
  CHECK(flip < 1e-11);
}

TEST_CASE("gaussian_initial is the heat kernel at sigma^2 / 2") {
  const auto lat = ReducedLatticed::canonical(0.3, 1.2);
  const auto init = gaussian_initial(lat, 48, 0.08);
  CHECK(kernel_relative_error(init, 0.08 * 0.08 / 2) < 1e-10);
  CHECK(kernel_relative_error(init, 0.01) > 1e-3);
  CHECK_THROWS_AS(gaussian_initial(lat, 48, 0.0), Error);
}
