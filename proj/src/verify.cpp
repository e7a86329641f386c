#include "uftlqr/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>

#include "uftlqr/contour.hpp"
#include "uftlqr/errors.hpp"
#include "uftlqr/fd.hpp"
#include "uftlqr/lqr.hpp"
#include "uftlqr/series.hpp"

namespace uftlqr {
namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

ProbeResult timed(const std::string& name, const std::function<ProbeResult()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  ProbeResult r;
  try {
    r = body();
  } catch (const Error& e) {
    r.pass = false;
    r.detail = std::string(error_kind_name(e.kind())) + ": " + e.what();
  }
  r.name = name;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Problem heat_single_mode() { return Problem::make(0.0, kPi, SpatialProfile::sine(kPi, 1.0, 1.0)); }

Problem tapered_sine_scenario() {
  const TimeSignal g = TimeSignal::sine(1.0, 1.0, 2.0 * kPi, 1.0);
  return Problem::make(5.0, kPi, SpatialProfile::sine(kPi, 1.0, 1.0), BoundarySignal{g, g});
}

ProbeResult admissibility() {
  ProbeResult r{"", true, "", 0.0};
  double worst = 1e300;
  for (double c : {0.0, 0.5, 1.0, 5.0}) {
    const ContourFamily f = build_contour(Dispersion::reaction_diffusion(c), QuadratureSpec{});
    worst = std::min(worst, f.admissibility.min_re_omega);
  }
  r.pass = worst > 0.0;
  r.detail = fmt("min Re omega on rays = %.3e", worst);
  return r;
}

ProbeResult vanishing(std::optional<double> angle) {
  const Problem p = heat_single_mode();
  ProbeResult r{"", true, "", 0.0};
  double worst = 0.0;
  for (double x : {1.0, 2.0}) {
    const ContourPoint pt = ContourEvaluator(p, QuadratureSpec{}).eval(x, 0.5);
    const double scale = *std::max_element(pt.term_magnitude, pt.term_magnitude + 3);
    const VanishingResult v = vanishing_term_check(p, x, 0.5, 0.0, 40, angle);
    const double ratio = v.residual / scale;
    worst = std::max(worst, std::isfinite(ratio) ? ratio : 1e300);
  }
  r.pass = worst <= 1e-6;
  r.detail = fmt("max residual / term scale = %.3e (bound 1e-6)", worst);
  return r;
}

ProbeResult parseval() {
  const SpatialProfile p = SpatialProfile::sine(kPi, 1.0, 1.0);
  GkOptions o;
  o.abs_tol = 1e-12;
  o.initial_panels = 400;
  const double K = 200.0;
  const double lhs =
      integrate_gk([&](double k) { return cd(std::norm(unified_transform(p, k))); }, -K, K, o).value.real() /
      (2.0 * kPi);
  const double rhs = kPi / 2.0;
  ProbeResult r{"", true, "", 0.0};
  const double rel = std::abs(lhs - rhs) / rhs;
  r.pass = rel <= 1e-4;
  r.detail = fmt("relative Parseval defect at K=200: %.3e (bound 1e-4)", rel);
  return r;
}

ProbeResult riccati() {
  double worst = 0.0, worst_res = 0.0;
  for (double c : {0.0, 5.0}) {
    const Dispersion d = Dispersion::reaction_diffusion(c);
    for (double k : {0.0, 1.0, 2.0}) {
      const RiccatiSolution s = solve_riccati_finite(d, k, 20.0, FrequencyInput{});
      const double ph = infinite_horizon_gain(d, k).phat;
      worst = std::max(worst, (s.P.front() - ph * Eigen::Matrix2d::Identity()).norm());
      worst_res = std::max(worst_res, are_residual(d, k).norm());
    }
  }
  ProbeResult r{"", true, "", 0.0};
  r.pass = worst <= 1e-6 && worst_res <= 1e-10;
  r.detail = fmt("max |P(0) - phat I|_F = %.3e, max ARE residual = %.3e", worst, worst_res);
  return r;
}

ProbeResult structure() {
  double lobe[2], corner[2], dev = 0.0;
  int i = 0;
  for (double c : {0.0, 5.0}) {
    const KernelMatrix km = build_kernel_matrix(Dispersion::reaction_diffusion(c), kPi, 10, 101);
    const ToeplitzHankelParts parts = toeplitz_hankel_decompose(km);
    dev = std::max({dev, parts.max_diagonal_deviation, parts.max_antidiagonal_deviation});
    lobe[i] = toeplitz_lobe_width(km);
    corner[i] = hankel_corner_mass_fraction(km);
    ++i;
  }
  ProbeResult r{"", true, "", 0.0};
  r.pass = dev <= 1e-12 && lobe[1] < lobe[0] && corner[1] > corner[0];
  r.detail = fmt("max diagonal deviation %.2e; lobe width %.3f -> %.3f", dev, lobe[0], lobe[1]) +
             fmt("; corner fraction %.3f -> %.3f", corner[0], corner[1]);
  return r;
}

ProbeResult equivalence(bool full) {
  const Problem p = tapered_sine_scenario();
  const SeriesCoefficients s = make_series(p, 40);
  const ContourEvaluator ev(p, QuadratureSpec{});
  const int nx = full ? 11 : 3, nt = full ? 5 : 2;
  double worst = 0.0;
  for (int i = 0; i < nx; ++i) {
    const double x = kPi * (0.1 + 0.8 * i / (nx - 1));
    for (int j = 0; j < nt; ++j) {
      const double t = 0.2 + 0.8 * j / (nt - 1);
      worst = std::max(worst, std::abs(ev.eval(x, t).control - series_control_eval(s, x, t)));
    }
  }
  ProbeResult r{"", true, "", 0.0};
  r.pass = worst <= 1e-3;
  r.detail = fmt("max |u_contour - u_series| = %.3e on %.0f nodes (bound 1e-3)", worst, nx * nt);
  return r;
}

ProbeResult fd_refinement() {
  ProbeResult r{"", true, "", 0.0};
  for (double c : {0.0, 5.0}) {
    double err[3];
    int i = 0;
    for (int N : {51, 101, 201}) {
      const GridModel m = discretize(c, kPi, N);
      err[i++] = compare_kernel(m, solve_care(m), 60).rel_frobenius;
    }
    const bool ok = err[2] <= 0.03 && err[0] / err[2] >= 3.0;
    r.pass = r.pass && ok;
    r.detail += fmt("c=%.0f: kernel error %.3e at N=201, ", c, err[2]) + fmt("N=51/N=201 ratio %.2f; ", err[0] / err[2]);
  }
  return r;
}

}  // namespace

std::vector<ProbeResult> verify_suite(const VerifyOptions& opt) {
  std::vector<ProbeResult> out;
  out.push_back(timed("contour_admissibility", admissibility));
  out.push_back(timed("vanishing_integral", [&] { return vanishing(opt.debug_contour_angle); }));
  out.push_back(timed("parseval", parseval));
  out.push_back(timed("riccati_convergence", riccati));
  out.push_back(timed("toeplitz_hankel", structure));
  out.push_back(timed("method_equivalence", [&] { return equivalence(opt.full); }));
  if (opt.full) out.push_back(timed("fd_refinement", fd_refinement));
  return out;
}

}  // namespace uftlqr
