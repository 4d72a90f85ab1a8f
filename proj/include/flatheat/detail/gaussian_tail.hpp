#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace flatheat::detail {

/// exp(alpha U^2) * integral_U^inf u^m exp(-alpha u^2) du, for U >= 0.
/// Scaled by exp(alpha U^2) so the result stays finite for large U; for
/// m = 0 and large arguments the erfc term is replaced by its upper bound
/// erfc(x) <= exp(-x^2) / (x sqrt(pi)).
inline double scaled_moment_tail(int m, double alpha, double U) {
  if (m == 1) return 1 / (2 * alpha);
  if (m == 0) {
    const double x = std::sqrt(alpha) * U;
    if (x < 20) return 0.5 * std::sqrt(std::numbers::pi / alpha) * std::exp(x * x) * std::erfc(x);
    return 1 / (2 * alpha * U);
  }
  return std::pow(U, m - 1) / (2 * alpha) + (m - 1) / (2 * alpha) * scaled_moment_tail(m - 2, alpha, U);
}

/// log of an upper bound for sum over p in P, |p| > R, of |p|^k exp(-alpha |p|^2),
/// where P is any point set with pairwise separation >= 2 rho (a lattice or a
/// translate of one, rho = packing radius).
///
/// Each point owns a disjoint disk of radius rho; on that disk
/// f(|p|) <= f(|z| - rho) once f(r) = r^k exp(-alpha r^2) is decreasing, which
/// holds for r >= sqrt(k / (2 alpha)). Integrating over |z| > R - rho gives
///   (2 / rho^2) * (I_{k+1}(U) + rho I_k(U)),  U = R - 2 rho.
/// Returns +inf when U is below the monotone range.
inline double log_gaussian_tail_bound(double R, double alpha, double rho, int k) {
  const double U = R - 2 * rho;
  if (U < 0 || U < std::sqrt(k / (2 * alpha))) return std::numeric_limits<double>::infinity();
  const double scaled = 2 / (rho * rho) * (scaled_moment_tail(k + 1, alpha, U) + rho * scaled_moment_tail(k, alpha, U));
  return std::log(scaled) - alpha * U * U;
}

inline double gaussian_tail_bound(double R, double alpha, double rho, int k) {
  return std::exp(log_gaussian_tail_bound(R, alpha, rho, k));
}

/// Smallest R (to bisection accuracy) whose tail bound is <= exp(log_target).
inline double truncation_radius(double alpha, double rho, int k, double log_target) {
  const double u0 = std::sqrt(k / (2 * alpha));
  auto log_bound_at = [&](double U) { return log_gaussian_tail_bound(U + 2 * rho, alpha, rho, k); };
  if (log_bound_at(u0) <= log_target) return u0 + 2 * rho;
  double lo = u0;
  double hi = std::max(u0, 1 / std::sqrt(alpha));
  while (log_bound_at(hi) > log_target) {
    lo = hi;
    hi *= 2;
  }
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (log_bound_at(mid) <= log_target ? hi : lo) = mid;
  }
  return hi + 2 * rho;
}

/// Neumaier's compensated summation.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0;
  double comp_ = 0;
};

inline constexpr double kUnitRoundoff = std::numeric_limits<double>::epsilon() / 2;

}  // namespace flatheat::detail
