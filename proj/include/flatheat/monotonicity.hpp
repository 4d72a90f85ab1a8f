#pragma once

// Geodesic monotonicity of heat and projection kernels: direction/arc-length
// scans along minimal geodesics, explicit counterexamples for generic and
// isosceles tori and Klein bottles, large-time violations for simple
// principal eigenvalues, and a census of critical points of K_t(0, .).

#include <string>
#include <vector>

#include "flatheat/spectral.hpp"
#include "flatheat/surface.hpp"

namespace flatheat {

struct ScanConfig {
  int n_directions = 360;
  int n_arc_samples = 64;
  /// Empty means the geometric grid 2^-7 .. 2^7.
  std::vector<double> t_values;
  /// Empty means {0} for tori and a klein_base_grid^2 grid for Klein bottles.
  std::vector<Vec2> base_points;
  /// A sample counts as a violation when u.grad K exceeds this fraction of
  /// the gradient scale (sum of per-term magnitude bounds) plus the error bound.
  double derivative_tolerance = 1e-12;
  /// Absolute truncation tolerance in units of exp(lambda_1 t) K.
  double kernel_epsilon = 1e-14;
  int klein_base_grid = 16;

  void validate() const;
  static std::vector<double> default_t_grid();
};

enum class KernelKind { Heat, Projection };

struct KernelSelector {
  KernelKind kind = KernelKind::Heat;
  SpectralMode mode;  // Projection only

  static KernelSelector heat() { return {}; }
  static KernelSelector projection(SpectralMode mode) { return {KernelKind::Projection, std::move(mode)}; }
};

struct ViolationWitness {
  Vec2 base = Vec2::Zero();
  Vec2 direction = Vec2::Zero();
  double s = 0;
  double s_max = 0;
  double t = 0;  // 0 for projection kernels
  /// u . grad K at base + s u; heat kernels in units of exp(lambda_1 t).
  double radial_derivative = 0;
  double error_bound = 0;
  double scale = 0;
  KernelKind kernel = KernelKind::Heat;
  double eigenvalue = 0;
};

enum class Verdict { Monotone, Violated, Inconclusive };

std::string_view to_string(Verdict v);
std::string_view to_string(KernelKind k);

struct MonotonicityReport {
  ScanConfig config;
  SurfaceKind surface_kind = SurfaceKind::Torus;
  double a = 0;
  double b = 0;
  KernelKind kernel = KernelKind::Heat;
  double eigenvalue = 0;
  std::vector<double> directions;  // angles actually scanned
  std::vector<ViolationWitness> witnesses;
  long points_checked = 0;
  long inconclusive = 0;
  /// Largest u.grad K / scale seen; evidence even when no witness is recorded.
  double max_relative_derivative = 0;
  Verdict verdict = Verdict::Monotone;
};

/// Directions (angles in [0, 2 pi)) used by scan: uniform angles plus the
/// symmetry axes and relevant/vertex directions of the surface, deduplicated.
std::vector<double> scan_directions(const FlatSurfaced& surface, int n_directions);

MonotonicityReport scan(const FlatSurfaced& surface, const KernelSelector& kernel, const ScanConfig& cfg);

struct CurveSample {
  double s = 0;
  double value = 0;
  double formula = 0;
};

struct GenericCounterexample {
  double a = 0;
  double b = 0;
  double s_star = 0;  // in units of b along the vertical geodesic
  std::vector<CurveSample> samples;  // P(0, (0, s b)) for s in [0.45, s_star]
  double max_formula_error = 0;
  bool strictly_increasing = false;  // on [1/2, s_star]
  double increase = 0;               // P(s_star) - P(1/2)
  bool verified = false;
};

GenericCounterexample counterexample_generic(double a, double b);

struct IsoscelesCounterexample {
  double a = 0;
  double b = 0;
  Vec2 z_star = Vec2::Zero();
  double diagonal_parameter = 0;  // z* = beta(s)
  double directional_derivative = 0;  // z* . grad P(0, z*)
  double error_bound = 0;
  double xi_dot_eta = 0;
  std::vector<CurveSample> diagonal;  // P(beta(s)) against (4/b) cos(2 pi s)
  double max_formula_error = 0;
  bool verified = false;
};

IsoscelesCounterexample counterexample_isosceles(double a);

struct AsymptoticSample {
  double t = 0;
  double difference = 0;  // exp(lambda_1 t) (K_t(x,y) - K_t(x,x))
  double error_bound = 0;
};

struct AsymptoticViolation {
  Vec2 x = Vec2::Zero();
  Vec2 y = Vec2::Zero();
  double phi_x = 0;
  double phi_y = 0;
  double eigenvalue = 0;
  bool found = false;
  double t_threshold = 0;
  double difference = 0;
  double error_bound = 0;
  bool revalidated = false;  // still positive at epsilon / 4
  std::vector<AsymptoticSample> samples;
};

AsymptoticViolation asymptotic_violation(const FlatSurfaced& surface, double epsilon = 1e-12);

struct KleinCounterexample {
  double b = 0;
  double xi = 0;
  std::string regime;  // "asymptotic", "multiplicity-2", "multiplicity-3"
  int multiplicity = 0;
  double eigenvalue = 0;
  double s_star = 0;
  std::vector<CurveSample> samples;  // projection along the vertical geodesic
  double max_formula_error = 0;
  double increase = 0;
  /// Projection witness at the middle of the increasing range.
  double witness_s = 0;
  double witness_derivative = 0;
  /// Heat kernel witness at the same point: smallest grid time where the
  /// scaled derivative is certified positive at epsilon and epsilon / 4.
  double heat_t = 0;
  double heat_derivative = 0;
  double heat_error_bound = 0;
  AsymptoticViolation asymptotic;
  bool verified = false;
};

KleinCounterexample counterexample_klein(double b, double xi);

enum class CriticalKind { Maximum, Minimum, Saddle };

std::string_view to_string(CriticalKind k);

struct CriticalPoint {
  Vec2 position = Vec2::Zero();  // Voronoi representative
  CriticalKind kind = CriticalKind::Maximum;
  double hessian_determinant = 0;  // exp(lambda_1 t) units
};

struct CriticalCensus {
  int maxima = 0;
  int minima = 0;
  int saddles = 0;
  int index_sum = 0;
  std::vector<CriticalPoint> points;
};

CriticalCensus critical_point_census(const FlatSurfaced& surface, double t, int grid);

}  // namespace flatheat
