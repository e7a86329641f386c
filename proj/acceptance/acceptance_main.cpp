// One PASS/FAIL line per criterion. Tolerances are fixed here and must not be
// loosened to make a run pass.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "uftlqr/contour.hpp"
#include "uftlqr/errors.hpp"
#include "uftlqr/fd.hpp"
#include "uftlqr/lqr.hpp"
#include "uftlqr/series.hpp"

using namespace uftlqr;

namespace {

constexpr double kPi = std::numbers::pi;

constexpr double kA1RelTol = 1e-6;
constexpr double kA2AbsTol = 1e-3;
constexpr double kA3RiccatiTol = 1e-6;
constexpr double kA3AreTol = 1e-10;
constexpr double kA4KernelTol = 0.03;
constexpr double kA4RefineRatio = 3.0;
constexpr double kA5RelTol = 1e-6;
constexpr double kA6StructTol = 1e-12;
constexpr double kA7ParsevalTol = 1e-4;
constexpr double kA7InverseTol = 1e-6;
constexpr double kA7ParityTol = 1e-10;

struct Verdict {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0, double d = 0.0) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = a + (b - a) * i / (n - 1);
  return v;
}

Problem single_mode() { return Problem::make(0.0, kPi, SpatialProfile::sine(kPi, 1.0, 1.0)); }

Problem tapered_sine() {
  const TimeSignal g = TimeSignal::sine(1.0, 1.0, 2.0 * kPi, 1.0);
  return Problem::make(5.0, kPi, SpatialProfile::sine(kPi, 1.0, 1.0), BoundarySignal{g, g});
}

Verdict a1() {
  const ContourFields f = contour_fields(single_mode(), linspace(0.1 * kPi, 0.9 * kPi, 11), linspace(0.1, 1.0, 5));
  const double r2 = std::sqrt(2.0);
  double worst = 0.0;
  for (size_t it = 0; it < f.control.t.size(); ++it)
    for (size_t ix = 0; ix < f.control.x.size(); ++ix) {
      const double x = f.control.x[ix], t = f.control.t[it];
      const double exact = -(r2 - 1.0) * std::exp(-r2 * t) * std::sin(x);
      worst = std::max(worst, std::abs(f.control.at(it, ix) - exact) / std::abs(exact));
    }
  return {worst <= kA1RelTol, fmt("max relative error %.3e (bound %.0e)", worst, kA1RelTol)};
}

Verdict a2() {
  const Problem p = tapered_sine();
  const std::vector<double> xs = linspace(0.1 * kPi, 0.9 * kPi, 11), ts = linspace(0.2, 1.0, 5);
  const ContourFields f = contour_fields(p, xs, ts);
  const SeriesCoefficients s = make_series(p, 40);
  double worst = 0.0;
  for (size_t it = 0; it < ts.size(); ++it)
    for (size_t ix = 0; ix < xs.size(); ++ix)
      worst = std::max(worst, std::abs(f.control.at(it, ix) - series_control_eval(s, xs[ix], ts[it])));
  return {worst <= kA2AbsTol, fmt("max |u_contour - u_series| %.3e (bound %.0e)", worst, kA2AbsTol)};
}

Verdict a3() {
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
  return {worst <= kA3RiccatiTol && worst_res <= kA3AreTol,
          fmt("max |P(0) - phat I|_F %.3e (bound %.0e), ARE residual %.3e (bound %.0e)", worst, kA3RiccatiTol,
              worst_res, kA3AreTol)};
}

Verdict a4() {
  Verdict v{true, ""};
  for (double c : {0.0, 5.0}) {
    double err[2];
    int i = 0;
    for (int N : {51, 201}) {
      const GridModel m = discretize(c, kPi, N);
      err[i++] = compare_kernel(m, solve_care(m), 60).rel_frobenius;
    }
    const double ratio = err[0] / err[1];
    v.pass = v.pass && err[1] <= kA4KernelTol && ratio >= kA4RefineRatio;
    v.detail += fmt("c=%.0f: error %.3e at N=201 (bound %.2f), N=51/N=201 ratio %.2f", c, err[1], kA4KernelTol,
                    ratio) +
                fmt(" (bound %.0f); ", kA4RefineRatio);
  }
  return v;
}

Verdict a5() {
  const Problem p = single_mode();
  const ContourEvaluator ev(p, QuadratureSpec{});
  Verdict v{true, ""};
  for (double x : {1.0, 2.0}) {
    const ContourPoint pt = ev.eval(x, 0.5);
    const double scale = *std::max_element(pt.term_magnitude, pt.term_magnitude + 3);
    const VanishingResult r = vanishing_term_check(p, x, 0.5);
    const VanishingResult r2 = vanishing_term_check(p, x, 0.5, 2.0 * r.radius);
    const bool halves = r2.residual <= 0.5 * r.residual;
    v.pass = v.pass && r.converged && r.residual <= kA5RelTol * scale && halves;
    v.detail += fmt("x=%.0f: residual %.3e, scale %.3e, residual at 2R %.3e; ", x, r.residual, scale, r2.residual);
  }
  return v;
}

Verdict a6() {
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
  return {dev <= kA6StructTol && lobe[1] < lobe[0] && corner[1] > corner[0],
          fmt("diagonal deviation %.2e; lobe width %.4f -> %.4f", dev, lobe[0], lobe[1]) +
              fmt("; corner mass %.4f -> %.4f", corner[0], corner[1])};
}

Verdict a7() {
  double parseval = 0.0, inverse = 0.0, parity = 0.0;
  for (double mode : {1.0, 2.0, 3.0}) {
    const SpatialProfile p = SpatialProfile::sine(kPi, 1.0, mode);
    GkOptions o;
    o.abs_tol = 1e-12;
    o.initial_panels = 400;
    const double K = 200.0;
    const double lhs =
        integrate_gk([&](double k) { return cd(std::norm(unified_transform(p, k))); }, -K, K, o).value.real() /
        (2.0 * kPi);
    parseval = std::max(parseval, std::abs(lhs - kPi / 2.0) / (kPi / 2.0));
    for (double x : {0.25 * kPi, 0.5 * kPi, 0.8 * kPi}) {
      const auto r = inverse_transform([&](double k) { return unified_transform(p, k); }, x, 2000.0);
      inverse = std::max(inverse, std::abs(r.value - p(x)));
    }
  }
  const SpatialProfile poly = SpatialProfile::polynomial(kPi, {0.2, 1.0, -0.3});
  const Problem ts = tapered_sine();
  for (int m = 1; m <= 8; ++m) {
    parity = std::max(parity, std::abs(modal_coeff(poly, m) + modal_coeff(poly, -m)));
    const cd bp = boundary_coeffs(ts.bc, ts.d, kPi, m, 0.5).b_underline;
    const cd bm = boundary_coeffs(ts.bc, ts.d, kPi, -m, 0.5).b_underline;
    parity = std::max(parity, std::abs(bp + bm));
  }
  for (double c : {0.0, 5.0}) {
    const Dispersion d = Dispersion::reaction_diffusion(c);
    for (cd k : {cd(0.7, 0.0), cd(2.0, 0.3), cd(-1.1, 0.8), cd(3.0, 2.0)}) {
      parity = std::max(parity, std::abs(omega_eval(d, k) - omega_eval(d, -k)) / std::abs(omega_eval(d, k)));
      parity = std::max(parity, std::abs(phat_eval(d, k) - phat_eval(d, -k)));
    }
  }
  return {parseval <= kA7ParsevalTol && inverse <= kA7InverseTol && parity <= kA7ParityTol,
          fmt("Parseval %.3e (bound %.0e), inversion %.3e (bound %.0e)", parseval, kA7ParsevalTol, inverse,
              kA7InverseTol) +
              fmt(", parity %.3e (bound %.0e)", parity, kA7ParityTol)};
}

struct Criterion {
  const char* id;
  std::function<Verdict()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all = {{"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4},
                                      {"A5", a5}, {"A6", a6}, {"A7", a7}};
  std::string only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      only = argv[++i];
    } else {
      std::fprintf(stderr, "usage: %s [--criterion A1..A7]\n", argv[0]);
      return 2;
    }
  }
  bool ok = true, matched = false;
  for (const Criterion& c : all) {
    if (!only.empty() && only != c.id) continue;
    matched = true;
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const Error& e) {
      v = {false, std::string(error_kind_name(e.kind())) + ": " + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %s: %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", c.id, v.detail.c_str(), secs);
    std::fflush(stdout);
    ok = ok && v.pass;
  }
  if (!matched) {
    std::fprintf(stderr, "unknown criterion %s\n", only.c_str());
    return 2;
  }
  return ok ? 0 : 4;
}
