#include "flatheat/pde.hpp"

#include <algorithm>
#include <cmath>

#include "flatheat/errors.hpp"
#include "flatheat/parallel.hpp"
#include "flatheat/spectral.hpp"

namespace flatheat {
namespace {

void check_grid(int n) {
  if (n < 4) throw Error(ErrorCode::InvalidParameter, "grid resolution must be >= 4");
}

long step_count(double span, double dt) { return std::max(0L, long(std::ceil(span / dt - 1e-9))); }

/// One explicit Euler step of length tau from u into out.
void euler_step(const Eigen::MatrixXd& u, Eigen::MatrixXd& out, const LaplacianCoefficients& c, double h,
                double tau) {
  const int n = int(u.rows());
  const double cp = tau * c.g11 / (h * h);
  const double cq = tau * c.g22 / (h * h);
  const double cm = tau * 2 * c.g12 / (4 * h * h);
  for (int j = 0; j < n; ++j) {
    const double* um = u.col((j + n - 1) % n).data();
    const double* u0 = u.col(j).data();
    const double* up = u.col((j + 1) % n).data();
    double* o = out.col(j).data();
    for (int i = 0; i < n; ++i) {
      const int im = i == 0 ? n - 1 : i - 1;
      const int ip = i == n - 1 ? 0 : i + 1;
      const double dpp = u0[ip] - 2 * u0[i] + u0[im];
      const double dqq = up[i] - 2 * u0[i] + um[i];
      const double dpq = up[ip] - um[ip] - up[im] + um[im];
      o[i] = u0[i] + cp * dpp + cq * dqq + cm * dpq;
    }
  }
}

}  // namespace

LaplacianCoefficients laplacian_coefficients(const ReducedLatticed& lat) {
  const Eigen::Matrix2d B = lat.basis();
  const Eigen::Matrix2d g = (B.transpose() * B).inverse();
  return {g(0, 0), g(0, 1), g(1, 1)};
}

double stable_time_step(const ReducedLatticed& lat, int n) {
  check_grid(n);
  const auto c = laplacian_coefficients(lat);
  const double h = 1.0 / n;
  return h * h / (2 * (c.g11 + c.g22 + 2 * std::abs(c.g12)));
}

GridSolution constant_initial(const ReducedLatticed& lat, int n, double value, double dt) {
  check_grid(n);
  return {lat, n, dt > 0 ? dt : stable_time_step(lat, n), Eigen::MatrixXd::Constant(n, n, value), 0};
}

GridSolution gaussian_initial(const ReducedLatticed& lat, int n, double sigma, double dt) {
  check_grid(n);
  if (!(sigma > 0)) throw Error(ErrorCode::InvalidParameter, "sigma must be positive");
  GridSolution sol{lat, n, dt > 0 ? dt : stable_time_step(lat, n), Eigen::MatrixXd(n, n), 0};
  const HeatKernel hk(FlatSurfaced::torus(lat), sigma * sigma / 2, 1e-14, Representation::Image);
  parallel_for(std::size_t(n), [&](std::size_t j) {
    for (int i = 0; i < n; ++i) sol.field(i, int(j)) = hk.value(Eigen::Vector2d::Zero(), sol.node(i, int(j))).value;
  });
  return sol;
}

GridSolution evolve(GridSolution sol, double t_final) {
  const double bound = stable_time_step(sol.lattice, sol.n);
  if (!(sol.dt > 0) || sol.dt > bound * (1 + 1e-12)) {
    throw Error(ErrorCode::UnstableStep, "time step exceeds the explicit stability bound " + std::to_string(bound));
  }
  if (!(t_final >= sol.time)) throw Error(ErrorCode::InvalidParameter, "cannot evolve backwards in time");
  const auto c = laplacian_coefficients(sol.lattice);
  const double h = sol.h();
  const double span = t_final - sol.time;
  const long steps = step_count(span, sol.dt);
  Eigen::MatrixXd next(sol.n, sol.n);
  for (long k = 0; k < steps; ++k) {
    const double tau = k + 1 < steps ? sol.dt : span - sol.dt * double(steps - 1);
    euler_step(sol.field, next, c, h, tau);
    sol.field.swap(next);
  }
  sol.time = t_final;
  return sol;
}

Eigen::MatrixXd radial_derivative_field(const GridSolution& sol) {
  const int n = sol.n;
  const double h = sol.h();
  const Eigen::Matrix2d inv_bt = sol.lattice.basis().transpose().inverse();
  Eigen::MatrixXd out(n, n);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double dp = (sol.field((i + 1) % n, j) - sol.field((i + n - 1) % n, j)) / (2 * h);
      const double dq = (sol.field(i, (j + 1) % n) - sol.field(i, (j + n - 1) % n)) / (2 * h);
      const Eigen::Vector2d grad = inv_bt * Eigen::Vector2d(dp, dq);
      const Eigen::Vector2d x = voronoi_representative(sol.lattice, sol.node(i, j));
      out(i, j) = x.dot(grad);
    }
  }
  return out;
}

double kernel_relative_error(const GridSolution& sol, double smoothing_time) {
  const HeatKernel hk(FlatSurfaced::torus(sol.lattice), sol.time + smoothing_time, 1e-14);
  std::vector<double> err(sol.n);
  std::vector<double> peak(sol.n);
  parallel_for(std::size_t(sol.n), [&](std::size_t j) {
    for (int i = 0; i < sol.n; ++i) {
      const double k = hk.value(Eigen::Vector2d::Zero(), sol.node(i, int(j))).value;
      err[j] = std::max(err[j], std::abs(sol.field(i, int(j)) - k));
      peak[j] = std::max(peak[j], std::abs(k));
    }
  });
  return *std::max_element(err.begin(), err.end()) / *std::max_element(peak.begin(), peak.end());
}

PdeCheck pde_check(const ReducedLatticed& lat, double t, int n) {
  if (!(t > 0)) throw Error(ErrorCode::NonPositiveTime, "t must be positive");
  PdeCheck out;
  out.n = n;
  out.t = t;
  out.sigma = 4.0 / n;
  auto sol = gaussian_initial(lat, n, out.sigma);
  out.dt = sol.dt;
  out.steps = step_count(t, sol.dt);
  sol = evolve(std::move(sol), t);
  out.relative_error = kernel_relative_error(sol, out.sigma * out.sigma / 2);
  out.mass = sol.mass();
  return out;
}

ConvergenceStudy convergence_study(const ReducedLatticed& lat, double t, const std::vector<int>& ns) {
  if (ns.size() < 2) throw Error(ErrorCode::InvalidParameter, "need at least two resolutions");
  ConvergenceStudy out;
  for (int n : ns) out.runs.push_back(pde_check(lat, t, n));
  const auto& first = out.runs.front();
  const auto& last = out.runs.back();
  out.order = std::log(first.relative_error / last.relative_error) / std::log(double(last.n) / first.n);
  return out;
}

}  // namespace flatheat
