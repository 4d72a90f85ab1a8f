// flatheat: command-line front end. Every command prints one JSON report.

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "flatheat/monotonicity.hpp"
#include "flatheat/pde.hpp"
#include "flatheat/selftest.hpp"
#include "flatheat/spectral.hpp"

namespace {

using flatheat::Vec2;
using json = nlohmann::ordered_json;

constexpr const char* kSchema = "flatheat-report/1";
constexpr const char* kVersion = "1.0.0";

enum ExitCode { kOk = 0, kBadArguments = 1, kEvaluatorError = 2, kExpectationFailed = 3 };

json vec(const Vec2& v) { return json::array({v.x(), v.y()}); }

Vec2 to_vec(const std::vector<double>& v, const char* name) {
  if (v.size() != 2) throw CLI::ValidationError(name, "expects two comma-separated numbers");
  return Vec2(v[0], v[1]);
}

struct SurfaceArgs {
  double a = 0;
  double b = 1;
  bool klein = false;
  double snap = 1e-6;
};

void add_surface_options(CLI::App* cmd, SurfaceArgs& s, bool allow_klein = true) {
  cmd->add_option("--a", s.a, "lattice parameter a (second basis vector is (-a, b))");
  cmd->add_option("--b", s.b, "lattice parameter b, or the Klein bottle height")->required();
  if (allow_klein) cmd->add_flag("--klein", s.klein, "use the flat Klein bottle of height b");
  cmd->add_option("--snap", s.snap, "snap (a, b) within this distance to the exact symmetric lattices")
      ->check(CLI::NonNegativeNumber);
}

/// Reduces {(1,0), (-a,b)} and snaps near-symmetric parameters to exact ones,
/// so that truncated decimal input such as b = 0.8660254 means the honeycomb.
flatheat::FlatSurfaced make_surface(const SurfaceArgs& s) {
  if (s.klein) return flatheat::FlatSurfaced::klein(s.b);
  const double tol = s.snap;
  double a = std::abs(s.a);
  double b = s.b;
  if (std::abs(a - 0.5) <= tol && std::abs(b - std::sqrt(3.0) / 2) <= tol) {
    return flatheat::FlatSurfaced::torus(flatheat::ReducedLatticed::honeycomb());
  }
  if (a <= tol && std::abs(b - 1) <= tol) return flatheat::FlatSurfaced::torus(flatheat::ReducedLatticed::square());
  if (a <= tol) {
    a = 0;
  } else if (a < 0.5 && std::abs(a * a + b * b - 1) <= tol) {
    b = std::sqrt(1 - a * a);
  }
  const auto lat = flatheat::reduce(flatheat::RawBasisd{Vec2(1, 0), Vec2(-a, b)});
  if (std::abs(lat.scale() - 1) > 1e-12) {
    throw flatheat::Error(flatheat::ErrorCode::InvalidParameter, "(1,0) is not a shortest vector of this lattice");
  }
  return flatheat::FlatSurfaced::torus(lat);
}

json surface_json(const flatheat::FlatSurfaced& s) {
  json j;
  j["kind"] = s.is_torus() ? "torus" : "klein";
  j["a"] = s.a();
  j["b"] = s.b();
  j["class"] = s.is_torus() ? std::string(to_string(classify(s.lattice()).tag)) : "KleinBottle";
  return j;
}

flatheat::Representation parse_rep(const std::string& r) {
  if (r == "spectral") return flatheat::Representation::Spectral;
  if (r == "image") return flatheat::Representation::Image;
  return flatheat::Representation::Auto;
}

struct CsvRow {
  double s;
  double value;
  double derivative;
  double error_bound;
};

void write_csv(const std::string& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path);
  if (!out) throw flatheat::Error(flatheat::ErrorCode::InvalidParameter, "cannot open " + path);
  out.precision(17);
  out << "s,value,derivative,error_bound\n";
  for (const auto& r : rows) out << r.s << ',' << r.value << ',' << r.derivative << ',' << r.error_bound << '\n';
}

/// Heat kernel (t > 0) or projection (mode given) along base + s u, s in [0, s_max].
std::vector<CsvRow> geodesic_curve(const flatheat::FlatSurfaced& surface, const Vec2& base, const Vec2& u, double s_max,
                                   double t, const flatheat::SpectralMode* mode, int count = 201) {
  std::vector<CsvRow> rows;
  std::optional<flatheat::HeatKernel> hk;
  if (!mode) hk.emplace(surface, t, 1e-12);
  for (int i = 0; i < count; ++i) {
    const double s = s_max * i / (count - 1);
    const Vec2 y = base + s * u;
    if (mode) {
      const auto g = flatheat::projection_gradient(surface, *mode, base, y);
      rows.push_back({s, flatheat::projection_kernel(surface, *mode, base, y), u.dot(g.gradient), g.error_bound});
    } else {
      const auto v = hk->value(base, y);
      const auto g = hk->gradient(base, y);
      rows.push_back({s, v.value, u.dot(g.gradient), std::max(v.error_bound, g.error_bound)});
    }
  }
  return rows;
}

json witness_json(const flatheat::ViolationWitness& w) {
  json j;
  j["base"] = vec(w.base);
  j["direction"] = vec(w.direction);
  j["s"] = w.s;
  j["s_max"] = w.s_max;
  j["t"] = w.t;
  j["radial_derivative"] = w.radial_derivative;
  j["error_bound"] = w.error_bound;
  j["scale"] = w.scale;
  j["kernel"] = std::string(to_string(w.kernel));
  if (w.kernel == flatheat::KernelKind::Projection) j["eigenvalue"] = w.eigenvalue;
  return j;
}

json curve_json(const std::vector<flatheat::CurveSample>& samples) {
  json arr = json::array();
  for (const auto& c : samples) arr.push_back({{"s", c.s}, {"value", c.value}, {"formula", c.formula}});
  return arr;
}

json asymptotic_json(const flatheat::AsymptoticViolation& v) {
  json j;
  j["x"] = vec(v.x);
  j["y"] = vec(v.y);
  j["phi_x"] = v.phi_x;
  j["phi_y"] = v.phi_y;
  j["eigenvalue"] = v.eigenvalue;
  j["found"] = v.found;
  j["t_threshold"] = v.found ? json(v.t_threshold) : json(nullptr);
  j["difference"] = v.difference;
  j["error_bound"] = v.error_bound;
  j["revalidated"] = v.revalidated;
  json samples = json::array();
  for (const auto& s : v.samples) {
    samples.push_back({{"t", s.t}, {"difference", s.difference}, {"error_bound", s.error_bound}});
  }
  j["samples"] = samples;
  return j;
}

json mode_json(const flatheat::SpectralMode& m) {
  json j;
  j["eigenvalue"] = m.eigenvalue;
  j["multiplicity"] = m.multiplicity;
  json gens = json::array();
  for (const auto& l : m.dual_generators) gens.push_back(vec(l));
  for (const auto& k : m.klein_generators) {
    gens.push_back({{"l1", k.l1}, {"l2", k.l2}, {"parity", k.parity == flatheat::KleinParity::Sine ? "sine" : "cosine"}});
  }
  j["generators"] = gens;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heat kernels and geodesic monotonicity on flat tori and Klein bottles"};
  app.require_subcommand(1);
  app.fallthrough();
  bool no_timing = false;
  std::string csv_path;
  app.add_flag("--no-timing", no_timing, "report wall_time_s as 0 so output is byte-identical");
  app.add_option("--csv", csv_path, "also write a sampled curve (s,value,derivative,error_bound)");

  // reduce
  auto* reduce_cmd = app.add_subcommand("reduce", "reduce a lattice basis to normal form");
  std::vector<double> u_in;
  std::vector<double> v_in;
  reduce_cmd->add_option("--u", u_in, "first basis vector x,y")->required()->delimiter(',')->expected(2);
  reduce_cmd->add_option("--v", v_in, "second basis vector x,y")->required()->delimiter(',')->expected(2);

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "symmetry class of the lattice (1,0), (-a,b)");
  double cls_a = 0;
  double cls_b = 1;
  double cls_tol = flatheat::kDefaultClassifyTolerance;
  classify_cmd->add_option("--a", cls_a, "lattice parameter a")->required();
  classify_cmd->add_option("--b", cls_b, "lattice parameter b")->required();
  classify_cmd->add_option("--tol", cls_tol, "classification tolerance")->check(CLI::PositiveNumber);

  // kernel
  auto* kernel_cmd = app.add_subcommand("kernel", "evaluate K_t(x,y) and its gradient in y");
  SurfaceArgs kernel_surface;
  add_surface_options(kernel_cmd, kernel_surface);
  std::vector<double> kx{0, 0};
  std::vector<double> ky{0, 0};
  double kt = 1;
  double keps = 1e-12;
  std::string krep = "auto";
  kernel_cmd->add_option("--x", kx, "first point x1,x2")->delimiter(',')->expected(2);
  kernel_cmd->add_option("--y", ky, "second point y1,y2")->delimiter(',')->expected(2);
  kernel_cmd->add_option("--t", kt, "time")->required();
  kernel_cmd->add_option("--eps", keps, "absolute truncation tolerance");
  kernel_cmd->add_option("--rep", krep, "representation")->check(CLI::IsMember({"spectral", "image", "auto"}));

  // scan
  auto* scan_cmd = app.add_subcommand("scan", "scan minimal geodesics for monotonicity violations");
  SurfaceArgs scan_surface;
  add_surface_options(scan_cmd, scan_surface);
  flatheat::ScanConfig cfg;
  std::optional<int> scan_lambda_index;
  std::string expect;
  double csv_angle_deg = 90;
  scan_cmd->add_option("--t-list", cfg.t_values, "comma-separated times (default 2^-7..2^7)")->delimiter(',');
  scan_cmd->add_option("--dirs", cfg.n_directions, "number of uniform directions")->check(CLI::Range(4, 1 << 20));
  scan_cmd->add_option("--samples", cfg.n_arc_samples, "arc-length samples per geodesic")->check(CLI::Range(8, 1 << 20));
  scan_cmd->add_option("--tol", cfg.derivative_tolerance, "derivative tolerance relative to the gradient scale")
      ->check(CLI::PositiveNumber);
  scan_cmd->add_option("--eps", cfg.kernel_epsilon, "kernel truncation tolerance")->check(CLI::PositiveNumber);
  scan_cmd->add_option("--base-grid", cfg.klein_base_grid, "Klein base points per axis")->check(CLI::Range(1, 1024));
  scan_cmd->add_option("--lambda-index", scan_lambda_index, "scan the projection onto this eigenvalue instead")
      ->check(CLI::Range(1, 100000));
  scan_cmd->add_option("--expect", expect, "exit 3 if the verdict contradicts the expectation")
      ->check(CLI::IsMember({"monotone"}));
  scan_cmd->add_option("--csv-angle", csv_angle_deg, "direction (degrees) of the curve written by --csv");

  // counterexample
  auto* cx_cmd = app.add_subcommand("counterexample", "reproduce a monotonicity counterexample");
  std::string cx_kind;
  double cx_a = 0.3;
  double cx_b = 1.2;
  double cx_xi = 0.2;
  cx_cmd->add_option("kind", cx_kind, "generic | isosceles | klein")
      ->required()
      ->check(CLI::IsMember({"generic", "isosceles", "klein"}));
  cx_cmd->add_option("--a", cx_a, "lattice parameter a");
  cx_cmd->add_option("--b", cx_b, "lattice parameter b or Klein height");
  cx_cmd->add_option("--xi", cx_xi, "Klein base point (xi, 0)");

  // projection-diag
  auto* diag_cmd = app.add_subcommand("projection-diag", "diagonal and gradient sums of a spectral projection");
  SurfaceArgs diag_surface;
  add_surface_options(diag_cmd, diag_surface);
  int diag_index = 1;
  int diag_grid = 64;
  diag_cmd->add_option("--lambda-index", diag_index, "index into the distinct eigenvalues (0 is trivial)")
      ->check(CLI::NonNegativeNumber);
  diag_cmd->add_option("--grid", diag_grid, "grid points per axis")->check(CLI::Range(2, 4096));

  // census
  auto* census_cmd = app.add_subcommand("census", "critical points of K_t(0, .) on a torus");
  SurfaceArgs census_surface;
  add_surface_options(census_cmd, census_surface, false);
  double census_t = 0.2;
  int census_grid = 256;
  census_cmd->add_option("--t", census_t, "time")->required();
  census_cmd->add_option("--grid", census_grid, "grid cells per axis")->check(CLI::Range(64, 8192));

  // selftest
  auto* selftest_cmd = app.add_subcommand("selftest", "run the invariant suite");

  // pde-check
  auto* pde_cmd = app.add_subcommand("pde-check", "finite-difference oracle against the analytic kernel");
  SurfaceArgs pde_surface;
  add_surface_options(pde_cmd, pde_surface, false);
  double pde_t = 0.1;
  int pde_n = 128;
  bool pde_convergence = false;
  pde_cmd->add_option("--t", pde_t, "final time")->required();
  pde_cmd->add_option("--n", pde_n, "grid resolution per axis")->check(CLI::Range(8, 4096));
  pde_cmd->add_flag("--convergence", pde_convergence, "also run n/4 and n/2 and report the observed order");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kBadArguments;
  }

  const auto start = std::chrono::steady_clock::now();
  json report;
  report["schema"] = kSchema;
  report["tool_version"] = kVersion;
  report["command"] = "";
  report["surface"] = nullptr;
  report["parameters"] = json::object();
  report["results"] = json::object();
  int exit_code = kOk;

  try {
    json& params = report["parameters"];
    json& results = report["results"];
    if (*reduce_cmd) {
      report["command"] = "reduce";
      const flatheat::RawBasisd raw{to_vec(u_in, "--u"), to_vec(v_in, "--v")};
      params["u"] = vec(raw.u);
      params["v"] = vec(raw.v);
      const auto lat = flatheat::reduce(raw);
      report["surface"] = surface_json(flatheat::FlatSurfaced::torus(lat));
      results["a"] = lat.a();
      results["b"] = lat.b();
      results["scale"] = lat.scale();
      results["rotation"] = lat.rotation();
      results["reflected"] = lat.reflected();
      const auto& m = lat.basis_change();
      results["basis_change"] = json::array({json::array({m(0, 0), m(0, 1)}), json::array({m(1, 0), m(1, 1)})});
      const Eigen::Matrix2d r = lat.reconstruct();
      results["reconstructed_u"] = vec(r.col(0));
      results["reconstructed_v"] = vec(r.col(1));
    } else if (*classify_cmd) {
      report["command"] = "classify";
      params["a"] = cls_a;
      params["b"] = cls_b;
      params["tol"] = cls_tol;
      const auto lat = flatheat::reduce(flatheat::RawBasisd{Vec2(1, 0), Vec2(-cls_a, cls_b)});
      const auto c = flatheat::classify(lat, cls_tol);
      report["surface"] = surface_json(flatheat::FlatSurfaced::torus(lat));
      results["tag"] = std::string(to_string(c.tag));
      results["tolerance_used"] = c.tolerance_used;
      results["a"] = lat.a();
      results["b"] = lat.b();
    } else if (*kernel_cmd) {
      report["command"] = "kernel";
      const auto surface = make_surface(kernel_surface);
      report["surface"] = surface_json(surface);
      const Vec2 x = to_vec(kx, "--x");
      const Vec2 y = to_vec(ky, "--y");
      params = {{"x", vec(x)}, {"y", vec(y)}, {"t", kt}, {"eps", keps}, {"rep", krep}};
      const flatheat::HeatKernel hk(surface, kt, keps, parse_rep(krep));
      const auto v = hk.value(x, y);
      const auto g = hk.gradient(x, y);
      results["value"] = v.value;
      results["error_bound"] = v.error_bound;
      results["terms_used"] = v.terms_used;
      results["representation_used"] = std::string(to_string(v.representation_used));
      results["gradient"] = vec(g.gradient);
      results["gradient_error_bound"] = g.error_bound;
      if (!csv_path.empty()) {
        const Vec2 d = y - x;
        if (d.norm() > 0) {
          const Vec2 u = d.normalized();
          write_csv(csv_path, geodesic_curve(surface, x, u, d.norm(), kt, nullptr));
        } else {
          write_csv(csv_path, {});
        }
      }
    } else if (*scan_cmd) {
      report["command"] = "scan";
      const auto surface = make_surface(scan_surface);
      report["surface"] = surface_json(surface);
      auto selector = flatheat::KernelSelector::heat();
      if (scan_lambda_index) {
        selector = flatheat::KernelSelector::projection(flatheat::mode_by_index(surface, *scan_lambda_index));
      }
      const auto r = flatheat::scan(surface, selector, cfg);
      params["kernel"] = std::string(to_string(r.kernel));
      if (scan_lambda_index) {
        params["lambda_index"] = *scan_lambda_index;
        params["eigenvalue"] = r.eigenvalue;
      }
      params["t_values"] = r.config.t_values;
      params["n_directions"] = r.config.n_directions;
      params["n_arc_samples"] = r.config.n_arc_samples;
      params["derivative_tolerance"] = r.config.derivative_tolerance;
      params["kernel_epsilon"] = r.config.kernel_epsilon;
      params["base_points"] = r.config.base_points.size();
      params["time_grid_note"] = "finite time grid only; sequences of times are not probed";
      results["verdict"] = std::string(to_string(r.verdict));
      results["points_checked"] = r.points_checked;
      results["directions_scanned"] = r.directions.size();
      results["inconclusive"] = r.inconclusive;
      results["max_relative_derivative"] = r.max_relative_derivative;
      results["witness_count"] = r.witnesses.size();
      json ws = json::array();
      for (const auto& w : r.witnesses) ws.push_back(witness_json(w));
      results["witnesses"] = ws;
      if (!csv_path.empty()) {
        const double th = csv_angle_deg * std::numbers::pi / 180;
        const Vec2 u(std::cos(th), std::sin(th));
        const Vec2 base = r.config.base_points.front();
        const double smax = flatheat::minimal_geodesic(surface, base, u).s_max;
        const auto mode = scan_lambda_index ? std::optional(selector.mode) : std::nullopt;
        const double t = r.config.t_values.empty() ? 0 : r.config.t_values.front();
        write_csv(csv_path, geodesic_curve(surface, base, u, smax, t, mode ? &*mode : nullptr));
      }
      if (expect == "monotone" && r.verdict == flatheat::Verdict::Violated) exit_code = kExpectationFailed;
    } else if (*cx_cmd) {
      report["command"] = "counterexample " + cx_kind;
      if (cx_kind == "generic") {
        params = {{"a", cx_a}, {"b", cx_b}};
        const auto r = flatheat::counterexample_generic(cx_a, cx_b);
        const auto surface = flatheat::FlatSurfaced::torus(flatheat::ReducedLatticed::canonical(r.a, r.b));
        report["surface"] = surface_json(surface);
        results["s_star"] = r.s_star;
        results["max_formula_error"] = r.max_formula_error;
        results["strictly_increasing"] = r.strictly_increasing;
        results["increase"] = r.increase;
        results["verified"] = r.verified;
        results["samples"] = curve_json(r.samples);
        if (!csv_path.empty()) {
          const auto mode = flatheat::principal_eigenvalue(surface);
          write_csv(csv_path, geodesic_curve(surface, Vec2::Zero(), Vec2(0, 1), r.s_star * r.b, 0, &mode));
        }
      } else if (cx_kind == "isosceles") {
        params = {{"a", cx_a}};
        const auto r = flatheat::counterexample_isosceles(cx_a);
        const auto surface = flatheat::FlatSurfaced::torus(flatheat::ReducedLatticed::canonical(r.a, r.b));
        report["surface"] = surface_json(surface);
        results["z_star"] = vec(r.z_star);
        results["diagonal_parameter"] = r.diagonal_parameter;
        results["directional_derivative"] = r.directional_derivative;
        results["error_bound"] = r.error_bound;
        results["xi_dot_eta"] = r.xi_dot_eta;
        results["max_formula_error"] = r.max_formula_error;
        results["verified"] = r.verified;
        results["diagonal"] = curve_json(r.diagonal);
        if (!csv_path.empty()) {
          const auto mode = flatheat::principal_eigenvalue(surface);
          const double len = r.z_star.norm();
          write_csv(csv_path, geodesic_curve(surface, Vec2::Zero(), r.z_star / len, len, 0, &mode));
        }
      } else {
        params = {{"b", cx_b}, {"xi", cx_xi}};
        const auto r = flatheat::counterexample_klein(cx_b, cx_xi);
        const auto surface = flatheat::FlatSurfaced::klein(cx_b);
        report["surface"] = surface_json(surface);
        results["regime"] = r.regime;
        results["eigenvalue"] = r.eigenvalue;
        results["multiplicity"] = r.multiplicity;
        if (r.regime == "asymptotic") {
          results["asymptotic"] = asymptotic_json(r.asymptotic);
        } else {
          results["s_star"] = r.s_star;
          results["max_formula_error"] = r.max_formula_error;
          results["increase"] = r.increase;
          results["witness_s"] = r.witness_s;
          results["witness_derivative"] = r.witness_derivative;
          results["heat_t"] = r.heat_t;
          results["heat_derivative"] = r.heat_derivative;
          results["heat_error_bound"] = r.heat_error_bound;
          results["samples"] = curve_json(r.samples);
        }
        results["verified"] = r.verified;
        if (!csv_path.empty()) {
          const Vec2 base(cx_xi, 0);
          const Vec2 u(0, 1);
          const double smax = flatheat::minimal_geodesic(surface, base, u).s_max;
          if (r.regime == "asymptotic") {
            const double t = r.asymptotic.found ? r.asymptotic.t_threshold : 1.0;
            write_csv(csv_path, geodesic_curve(surface, base, u, smax, t, nullptr));
          } else {
            const auto mode = flatheat::principal_eigenvalue(surface);
            write_csv(csv_path, geodesic_curve(surface, base, u, smax, 0, &mode));
          }
        }
      }
    } else if (*diag_cmd) {
      report["command"] = "projection-diag";
      const auto surface = make_surface(diag_surface);
      report["surface"] = surface_json(surface);
      params = {{"lambda_index", diag_index}, {"grid", diag_grid}};
      const auto mode = flatheat::mode_by_index(surface, diag_index);
      const auto d = flatheat::projection_diagonal_scan(surface, mode, diag_grid);
      const auto g = flatheat::gradient_sum_check(surface, mode, diag_grid);
      results["mode"] = mode_json(mode);
      results["diagonal"] = {{"min", d.min}, {"max", d.max}, {"expected", d.expected}, {"spread", d.max - d.min}};
      results["gradient_sum"] = {{"min", g.min}, {"max", g.max}, {"expected", g.expected}, {"spread", g.max - g.min}};
    } else if (*census_cmd) {
      report["command"] = "census";
      const auto surface = make_surface(census_surface);
      report["surface"] = surface_json(surface);
      params = {{"t", census_t}, {"grid", census_grid}};
      const auto c = flatheat::critical_point_census(surface, census_t, census_grid);
      results["maxima"] = c.maxima;
      results["minima"] = c.minima;
      results["saddles"] = c.saddles;
      results["index_sum"] = c.index_sum;
      json pts = json::array();
      for (const auto& p : c.points) {
        pts.push_back({{"position", vec(p.position)},
                       {"kind", std::string(to_string(p.kind))},
                       {"hessian_determinant", p.hessian_determinant}});
      }
      results["points"] = pts;
    } else if (*selftest_cmd) {
      report["command"] = "selftest";
      bool all = true;
      json checks = json::array();
      for (const auto& r : flatheat::run_selftest()) {
        all = all && r.passed;
        checks.push_back({{"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
      }
      results["passed"] = all;
      results["checks"] = checks;
      if (!all) exit_code = kEvaluatorError;
    } else if (*pde_cmd) {
      report["command"] = "pde-check";
      const auto surface = make_surface(pde_surface);
      report["surface"] = surface_json(surface);
      params = {{"t", pde_t}, {"n", pde_n}, {"convergence", pde_convergence}};
      auto run_json = [](const flatheat::PdeCheck& r) {
        return json{{"n", r.n},       {"sigma", r.sigma}, {"dt", r.dt},
                    {"steps", r.steps}, {"relative_error", r.relative_error}, {"mass", r.mass}};
      };
      if (pde_convergence) {
        const auto st = flatheat::convergence_study(surface.lattice(), pde_t, {pde_n / 4, pde_n / 2, pde_n});
        json runs = json::array();
        for (const auto& r : st.runs) runs.push_back(run_json(r));
        results["runs"] = runs;
        results["order"] = st.order;
      } else {
        results["runs"] = json::array({run_json(flatheat::pde_check(surface.lattice(), pde_t, pde_n))});
      }
    }
  } catch (const flatheat::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kEvaluatorError;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadArguments;
  }

  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report["wall_time_s"] = no_timing ? 0.0 : elapsed;
  std::cout << report.dump(2) << '\n';
  return exit_code;
}
