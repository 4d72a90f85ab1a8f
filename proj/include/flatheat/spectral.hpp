#pragma once

// Laplace spectra of flat tori and Klein bottles, heat kernels with certified
// truncation error, and spectral projection kernels.
//
// Torus R^2/L: eigenfunctions exp(2 pi i l.x) for l in the dual lattice,
// eigenvalue (2 pi |l|)^2, normalised by 1/sqrt(area).
// Klein bottle of height b: cos(2 pi l1 x1) e^{i pi l2 x2 / b} (l2 even) and
// sin(2 pi l1 x1) e^{i pi l2 x2 / b} (l1 > 0, l2 odd), eigenvalue
// (2 pi l1)^2 + (pi l2 / b)^2. All kernels here use real orthonormal forms.

#include <Eigen/Dense>

#include <string_view>
#include <vector>

#include "flatheat/errors.hpp"
#include "flatheat/lattice.hpp"
#include "flatheat/surface.hpp"

namespace flatheat {

using Vec2 = Eigen::Vector2d;

inline constexpr double kModeGroupingTolerance = 1e-9;
inline constexpr long kDefaultTermBudget = 10'000'000;

enum class Representation { Spectral, Image, Auto };

constexpr std::string_view to_string(Representation rep) {
  switch (rep) {
    case Representation::Spectral: return "spectral";
    case Representation::Image: return "image";
    case Representation::Auto: return "auto";
  }
  return "unknown";
}

enum class KleinParity { Cosine, Sine };

/// Klein-bottle mode index with l1, l2 >= 0. Cosine needs l2 even, Sine needs
/// l2 odd and l1 > 0. `functions` counts the real eigenfunctions it carries.
struct KleinIndex {
  int l1 = 0;
  int l2 = 0;
  KleinParity parity = KleinParity::Cosine;
  int functions = 1;
};

struct SpectralMode {
  double eigenvalue = 0;
  /// Torus: one dual vector per +-l pair (the zero vector for the trivial mode).
  std::vector<Vec2> dual_generators;
  std::vector<KleinIndex> klein_generators;
  int multiplicity = 0;

  SurfaceKind surface_kind = SurfaceKind::Torus;
  double surface_a = 0;
  double surface_b = 0;

  bool belongs_to(const FlatSurfaced& surface) const {
    return surface_kind == surface.kind() && surface_a == surface.a() && surface_b == surface.b();
  }
};

/// All modes with eigenvalue <= lambda_max, ascending. Eigenvalues within
/// tol * max(1, lambda) of each other form one mode.
std::vector<SpectralMode> enumerate_modes(const FlatSurfaced& surface, double lambda_max,
                                          double tol = kModeGroupingTolerance);

/// Smallest positive eigenvalue with its eigenspace.
SpectralMode principal_eigenvalue(const FlatSurfaced& surface);

/// Mode `index` in the ascending list of distinct eigenvalues (0 is trivial).
SpectralMode mode_by_index(const FlatSurfaced& surface, int index);

struct KernelQuery {
  FlatSurfaced surface;
  Vec2 x = Vec2::Zero();
  Vec2 y = Vec2::Zero();
  double t = 1;
  double epsilon = 1e-12;
  Representation representation = Representation::Auto;
};

struct KernelValue {
  double value = 0;
  double error_bound = 0;
  long terms_used = 0;
  Representation representation_used = Representation::Spectral;
};

/// Gradient with respect to the second argument.
struct GradientValue {
  Vec2 gradient = Vec2::Zero();
  double error_bound = 0;
  /// Sum of per-term magnitude bounds; the natural size against which the
  /// gradient's sign is judged.
  double scale = 0;
  long terms_used = 0;
  Representation representation_used = Representation::Spectral;
};

/// Heat kernel evaluator for one surface and time. Immutable after
/// construction; the truncated term lists are built once and summed in a
/// fixed order, so results are bitwise reproducible.
///
/// error_bound = certified truncation tail (<= epsilon / 2) + a model bound for
/// rounding. The rounding part is not forced below epsilon; requests beyond
/// double precision report an error_bound above epsilon rather than failing.
///
/// With decay_shift = mu, gradient() and fluctuation() return their results
/// multiplied by exp(mu t). Passing the principal eigenvalue keeps large-time
/// quantities O(1) instead of underflowing.
class HeatKernel {
 public:
  HeatKernel(const FlatSurfaced& surface, double t, double epsilon = 1e-12,
             Representation representation = Representation::Auto, double decay_shift = 0,
             long term_budget = kDefaultTermBudget);

  const FlatSurfaced& surface() const { return surface_; }
  double time() const { return t_; }
  double epsilon() const { return epsilon_; }
  double decay_shift() const { return shift_; }
  Representation representation() const { return rep_; }
  long terms() const;

  /// Auto picks Image when 4 pi t < area, Spectral otherwise.
  static Representation resolve(const FlatSurfaced& surface, double t, Representation requested);

  KernelValue value(const Vec2& x, const Vec2& y) const;
  GradientValue gradient(const Vec2& x, const Vec2& y) const;

  /// exp(shift t) * (K_t(x,y) - 1/area), summed without the constant mode.
  /// Spectral representation only.
  KernelValue fluctuation(const Vec2& x, const Vec2& y) const;

  /// exp(shift t) * (K_t(x,y) - K_t(x,z)) without cancellation against the
  /// constant mode. Spectral representation only.
  KernelValue difference(const Vec2& x, const Vec2& y, const Vec2& z) const;

 private:
  struct SpectralTerm {
    Vec2 freq;          // torus: 2 pi l; Klein: (2 pi l1, pi l2 / b)
    double weight = 0;  // folded multiplicity * exp(-lambda t) / area
    double shifted_weight = 0;
    bool odd = false;   // Klein sine-type
    bool constant = false;
  };
  struct ImageTerm {
    Vec2 point;
  };

  void build_spectral(long term_budget);
  void build_image(long term_budget);
  double spectral_term_value(const SpectralTerm& term, const Vec2& x, const Vec2& y, double weight,
                             double& rounding_weight) const;
  Vec2 fold_cover(const Vec2& d) const;

  FlatSurfaced surface_;
  double t_;
  double epsilon_;
  Representation rep_;
  double shift_;

  std::vector<SpectralTerm> spectral_;
  std::vector<ImageTerm> image_;
  double value_tail_ = 0;
  double gradient_tail_ = 0;
  double shifted_value_tail_ = 0;
};

KernelValue heat_kernel(const KernelQuery& query);
GradientValue heat_kernel_gradient(const KernelQuery& query);

struct EigenfunctionSample {
  double value = 0;
  Vec2 gradient = Vec2::Zero();
};

/// An orthonormal real basis of the eigenspace, evaluated at x.
std::vector<EigenfunctionSample> eigenfunctions(const FlatSurfaced& surface, const SpectralMode& mode, const Vec2& x);

/// Integral kernel of the projection onto the eigenspace.
double projection_kernel(const FlatSurfaced& surface, const SpectralMode& mode, const Vec2& x, const Vec2& y);

/// Gradient of the projection kernel in y; error_bound covers rounding only.
GradientValue projection_gradient(const FlatSurfaced& surface, const SpectralMode& mode, const Vec2& x,
                                  const Vec2& y);

/// grid x grid sample points of the fundamental domain (lattice parallelogram
/// or [0,1) x [0,b)).
std::vector<Vec2> fundamental_grid(const FlatSurfaced& surface, int grid);

struct DiagonalScan {
  double min = 0;
  double max = 0;
  double expected = 0;
};

/// Extremes of P(x,x) over the grid; expected = multiplicity / area.
DiagonalScan projection_diagonal_scan(const FlatSurfaced& surface, const SpectralMode& mode, int grid);

/// Extremes of sum_j |grad phi_j|^2 over the grid; expected = lambda * m / area.
DiagonalScan gradient_sum_check(const FlatSurfaced& surface, const SpectralMode& mode, int grid);

}  // namespace flatheat
