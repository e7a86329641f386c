#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uftlqr/errors.hpp"
#include "uftlqr/lqr.hpp"
#include "uftlqr/series.hpp"

using namespace uftlqr;
using std::numbers::pi;

namespace {
Problem single_mode(double c = 0.0) { return Problem::make(c, pi, SpatialProfile::sine(pi, 1.0, 1.0)); }
const double kR2 = std::sqrt(2.0);

Problem tapered(double c) {
  const TimeSignal g = TimeSignal::sine(1.0, 1.0, 2.0 * pi, 1.0);
  return Problem::make(c, pi, SpatialProfile::sine(pi, 1.0, 1.0), BoundarySignal{g, g});
}
}  // namespace

TEST_CASE("modal coefficients") {
  const auto m1 = modal_coeffs(SpatialProfile::sine(2.0, 1.0, 1.0), 6);
  CHECK(std::abs(m1[0] - 1.0) < 1e-14);
  for (int m = 1; m < 6; ++m) CHECK(std::abs(m1[m]) < 1e-14);
  for (double v : modal_coeffs(SpatialProfile::polynomial(pi, {0.0}), 5)) CHECK(v == 0.0);
  // x (pi - x) = pi x - x^2
  const auto mp = modal_coeffs(SpatialProfile::polynomial(pi, {0.0, pi, -1.0}), 9);
  for (int m = 1; m <= 9; ++m) {
    const double expect = (m % 2 == 1) ? 8.0 / (pi * m * m * m) : 0.0;
    CHECK(std::abs(mp[m - 1] - expect) < 1e-13);
  }
  CHECK_THROWS_AS(modal_coeffs(SpatialProfile::sine(pi, 1.0, 1.0), 0), Error);
}

TEST_CASE("parity identities") {
  const SpatialProfile p = SpatialProfile::polynomial(pi, {0.3, 1.0, -0.2});
  const Problem pr = tapered(5.0);
  CHECK(modal_coeff(p, 0) == 0.0);
  for (int m = 1; m <= 6; ++m) {
    CHECK(std::abs(modal_coeff(p, m) + modal_coeff(p, -m)) < 1e-12);
    const BoundaryCoeffs bp = boundary_coeffs(pr.bc, pr.d, pi, m, 0.7);
    const BoundaryCoeffs bm = boundary_coeffs(pr.bc, pr.d, pi, -m, 0.7);
    CHECK(std::abs(bp.b_underline + bm.b_underline) < 1e-12);
    CHECK(std::abs(bp.b_scaled + bm.b_scaled) < 1e-12);
  }
  CHECK(boundary_coeffs(pr.bc, pr.d, pi, 0, 0.7).b_underline == cd(0.0));
}

TEST_CASE("boundary coefficients") {
  const Problem h = single_mode();
  const BoundaryCoeffs z = boundary_coeffs(h.bc, h.d, pi, 3, 0.4);
  CHECK(z.b_scaled == cd(0.0));
  CHECK(z.b_underline == cd(0.0));
  // At t = 0 the past integrals are empty.
  const Problem pr = tapered(0.0);
  const BoundaryCoeffs b0 = boundary_coeffs(pr.bc, pr.d, pi, 1, 0.0);
  CHECK(std::abs(b0.b_scaled) < 1e-15);
  CHECK(std::abs(b0.b_inst) < 1e-15);  // sin(0) = 0
}

TEST_CASE("b_m against nested quadrature") {
  const Problem pr = tapered(0.0);
  const TimeSignal& g = pr.bc.g0;
  const double t = 0.5, k = 1.0;  // m = 1, L = pi
  const auto gain = infinite_horizon_gain(pr.d, k);
  const double w = gain.omega.real(), ph = gain.phat;
  GkOptions o;
  o.abs_tol = 1e-14;
  o.initial_panels = 8;
  auto G = [&](double tau) {
    return integrate_gk([&](double r) { return cd(std::exp(w * (tau - r)) * g(r)); }, tau, g.vanish_time(), o)
        .value.real();
  };
  const double tilde = integrate_gk([&](double s) { return cd(std::exp(w * s) * g(s)); }, 0.0, t, o).value.real();
  const double under = integrate_gk([&](double s) { return cd(std::exp(w * s) * G(s)); }, 0.0, t, o).value.real();
  const double check = tilde - ph * under;
  // m = 1: (-1)^m = -1, g0 = h0
  const double b = 2.0 / pi * k * (check + check);
  const BoundaryCoeffs bc = boundary_coeffs(pr.bc, pr.d, pi, 1, t);
  CHECK(std::abs(bc.b() - b) < 1e-8);
  CHECK(std::abs(bc.b_ff - (-2.0 / pi * k * ph * (G(t) + G(t)))) < 1e-8);
}

TEST_CASE("single mode series state and control") {
  const SeriesCoefficients s = make_series(single_mode(), 1);
  for (double t : {0.0, 0.3, 1.0}) {
    for (double x : {0.0, 0.4, 1.7, pi}) {
      CHECK(std::abs(series_state_eval(s, x, t) - std::exp(-kR2 * t) * std::sin(x)) < 1e-14);
      CHECK(std::abs(series_control_eval(s, x, t) + (kR2 - 1.0) * std::exp(-kR2 * t) * std::sin(x)) < 1e-14);
    }
  }
  const SeriesCoefficients zero = make_series(Problem::make(0.0, pi, SpatialProfile::polynomial(pi, {0.0})), 8);
  CHECK(series_control_eval(zero, 1.0, 0.5) == 0.0);
}

TEST_CASE("series reproduces the initial profile at t = 0") {
  const Problem p = Problem::make(1.0, pi, SpatialProfile::polynomial(pi, {0.0, pi, -1.0}));
  const SeriesCoefficients s = make_series(p, 60);
  for (double x : {0.5, 1.5, 2.5}) CHECK(std::abs(series_state_eval(s, x, 0.0) - x * (pi - x)) < 1e-5);
}

TEST_CASE("psi consistency") {
  const Problem pr = tapered(5.0);
  const SeriesCoefficients s = make_series(pr, 4);
  for (int m = 1; m <= 4; ++m) {
    const double t = 0.6;
    const cd expect = cd(0.0, 0.5) * std::exp(-s.omega[m - 1] * t) * (-s.phi0[m - 1] - s.boundary(m, t).b());
    CHECK(std::abs(s.psi(m, t) - expect) < 1e-13);
  }
}

TEST_CASE("series control converges in M") {
  const Problem pr = Problem::make(0.0, pi, SpatialProfile::polynomial(pi, {0.0, pi, -1.0}));
  double prev = 1e300;
  for (int M : {5, 10, 20}) {
    const SeriesCoefficients a = make_series(pr, M), b = make_series(pr, 2 * M);
    double d = 0.0;
    for (double x = 0.1; x < pi; x += 0.3)
      d = std::max(d, std::abs(series_control_eval(a, x, 0.002) - series_control_eval(b, x, 0.002)));
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("kernel examples") {
  const Dispersion heat = Dispersion::reaction_diffusion(0.0);
  double peak = 1.0;
  for (int m = 1; m <= 10; ++m) peak += 2.0 * (-m * m + std::sqrt(std::pow(m, 4) + 1.0));
  CHECK(std::abs(kernel_eval(heat, pi, 10, 0.7, 0.7) - peak) < 1e-12);
  CHECK(std::abs(kernel_eval(heat, pi, 10, 0.3, 1.1) - kernel_eval(heat, pi, 10, 0.8, 1.6)) < 1e-12);
  CHECK(std::abs(kernel_eval(heat, pi, 10, 0.3, 1.1) - kernel_eval(heat, pi, 10, 1.1, 0.3)) < 1e-12);
  CHECK(kernel_eval(Dispersion::reaction_diffusion(5.0), pi, 10, 0.0, 0.0) < kernel_eval(heat, pi, 10, 0.0, 0.0));
  CHECK_THROWS_AS(kernel_eval(heat, pi, 0, 0.0, 0.0), Error);
}

TEST_CASE("Toeplitz plus Hankel structure") {
  double lobe[2], corner[2];
  int i = 0;
  for (double c : {0.0, 5.0}) {
    const KernelMatrix km = build_kernel_matrix(Dispersion::reaction_diffusion(c), pi, 10, 101);
    const ToeplitzHankelParts parts = toeplitz_hankel_decompose(km);
    CHECK(parts.max_diagonal_deviation <= 1e-12);
    CHECK(parts.max_antidiagonal_deviation <= 1e-12);
    CHECK((km.combined - (km.toeplitz - km.hankel) / (2.0 * pi)).norm() == 0.0);
    lobe[i] = toeplitz_lobe_width(km);
    corner[i] = hankel_corner_mass_fraction(km);
    ++i;
  }
  CHECK(lobe[1] < lobe[0]);
  CHECK(corner[1] > corner[0]);
}

TEST_CASE("feedback form") {
  const Problem p = single_mode();
  const SeriesCoefficients s = make_series(p, 10);
  StateRow row;
  const double t = 0.4;
  for (int j = 0; j <= 200; ++j) {
    row.xi.push_back(pi * j / 200.0);
    row.phi.push_back(std::exp(-kR2 * t) * std::sin(row.xi.back()));
  }
  for (double x : {0.5, 1.5, 2.5})
    CHECK(std::abs(feedback_control_eval(s, row, x, t) + (kR2 - 1.0) * std::exp(-kR2 * t) * std::sin(x)) < 1e-4);
  StateRow zero{row.xi, std::vector<double>(row.xi.size(), 0.0)};
  CHECK(feedback_control_eval(s, zero, 1.0, t) == 0.0);
  StateRow coarse{{0.0, pi / 2, pi}, {0.0, 1.0, 0.0}};
  CHECK_THROWS_AS(feedback_control_eval(s, coarse, 1.0, t), Error);
}

TEST_CASE("feedback form equals the series control for the series state") {
  const Problem pr = tapered(5.0);
  const SeriesCoefficients s = make_series(pr, 20);
  const double t = 0.6;
  std::vector<double> a, c;
  s.amplitudes(t, a, c);
  StateRow row;
  for (int j = 0; j <= 400; ++j) {
    const double xi = pi * j / 400.0;
    double phi = 0.0;
    for (int m = 0; m < s.M; ++m) phi += a[m] * std::sin(s.k[m] * xi);
    row.xi.push_back(xi);
    row.phi.push_back(phi);
  }
  for (double x : {0.4, 1.2, 2.9})
    CHECK(std::abs(feedback_control_eval(s, row, x, t) - series_control_eval(s, x, t)) < 1e-4);
}
