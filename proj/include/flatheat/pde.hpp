#pragma once

// Explicit finite-difference heat solver on the fundamental parallelogram of
// a flat torus, in lattice coordinates x = p b1 + q b2 with periodic
// wraparound. Used as an independent oracle for the analytic kernels.

#include <Eigen/Dense>

#include <vector>

#include "flatheat/lattice.hpp"

namespace flatheat {

/// Delta = g11 d_pp + 2 g12 d_pq + g22 d_qq, (g^ij) the inverse Gram matrix.
struct LaplacianCoefficients {
  double g11 = 0;
  double g12 = 0;
  double g22 = 0;
};

LaplacianCoefficients laplacian_coefficients(const ReducedLatticed& lat);

/// Largest stable explicit step: h^2 / (2 (g11 + g22 + 2|g12|)), h = 1/n.
double stable_time_step(const ReducedLatticed& lat, int n);

struct GridSolution {
  ReducedLatticed lattice;
  int n = 0;
  double dt = 0;
  /// field(i, j) is the value at lattice coordinates (i/n, j/n).
  Eigen::MatrixXd field;
  double time = 0;

  double h() const { return 1.0 / n; }
  Eigen::Vector2d node(int i, int j) const { return lattice.point(Eigen::Vector2d(double(i) / n, double(j) / n)); }
  /// Riemann sum of the field over the fundamental domain.
  double mass() const { return field.sum() * h() * h() * lattice.covolume(); }
};

GridSolution constant_initial(const ReducedLatticed& lat, int n, double value, double dt = 0);

/// Periodised unit-mass Gaussian of standard deviation sigma centred at the
/// origin; this is exactly K_{sigma^2/2}(0, .). dt = 0 selects the stable step.
GridSolution gaussian_initial(const ReducedLatticed& lat, int n, double sigma, double dt = 0);

/// Steps to absolute time t_final; the last step is shortened to land on it.
GridSolution evolve(GridSolution sol, double t_final);

/// x . grad u at every node, x the Voronoi representative of the node.
Eigen::MatrixXd radial_derivative_field(const GridSolution& sol);

/// Relative L-infinity distance from the heat kernel K_{time + smoothing}(0, .).
double kernel_relative_error(const GridSolution& sol, double smoothing_time);

struct PdeCheck {
  int n = 0;
  double sigma = 0;
  double t = 0;
  double dt = 0;
  long steps = 0;
  double relative_error = 0;
  double mass = 0;
};

/// Gaussian (sigma = 4h) at the origin evolved to t and compared with the
/// analytic kernel smoothed by the same Gaussian.
PdeCheck pde_check(const ReducedLatticed& lat, double t, int n);

struct ConvergenceStudy {
  std::vector<PdeCheck> runs;
  double order = 0;  // from the first and last run
};

ConvergenceStudy convergence_study(const ReducedLatticed& lat, double t, const std::vector<int>& ns);

}  // namespace flatheat
