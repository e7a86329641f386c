#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uftlqr/contour.hpp"
#include "uftlqr/errors.hpp"
#include "uftlqr/series.hpp"

using namespace uftlqr;
using std::numbers::pi;

namespace {
const double kR2 = std::sqrt(2.0);

Problem single_mode() { return Problem::make(0.0, pi, SpatialProfile::sine(pi, 1.0, 1.0)); }

Problem tapered(double c) {
  const TimeSignal g = TimeSignal::sine(1.0, 1.0, 2.0 * pi, 1.0);
  return Problem::make(c, pi, SpatialProfile::sine(pi, 1.0, 1.0), BoundarySignal{g, g});
}
}  // namespace

TEST_CASE("single heat mode from the contour formula") {
  const ContourEvaluator ev(single_mode(), QuadratureSpec{});
  for (double x : {0.1 * pi, 0.5 * pi, 0.9 * pi}) {
    for (double t : {0.1, 0.5, 1.0}) {
      const ContourPoint pt = ev.eval(x, t);
      const double u = -(kR2 - 1.0) * std::exp(-kR2 * t) * std::sin(x);
      const double phi = std::exp(-kR2 * t) * std::sin(x);
      CHECK(std::abs(pt.control - u) <= 1e-6 * std::abs(u));
      CHECK(std::abs(pt.state - phi) <= 1e-6 * std::abs(phi));
      CHECK(std::abs(pt.control.imag()) < 1e-8);
    }
  }
}

TEST_CASE("zero data give a zero control") {
  const Problem p = Problem::make(2.0, 1.5, SpatialProfile::polynomial(1.5, {0.0}));
  const ContourPoint pt = ContourEvaluator(p, QuadratureSpec{}).eval(0.6, 0.4);
  CHECK(std::abs(pt.control) < 1e-14);
  CHECK(std::abs(pt.state) < 1e-14);
}

TEST_CASE("reflection symmetry") {
  // phi0 symmetric about L/2 and g0 = h0, so the fields are too.
  const Problem p = tapered(1.0);
  const ContourEvaluator ev(p, QuadratureSpec{});
  const ContourPoint a = ev.eval(0.7, 0.5), b = ev.eval(pi - 0.7, 0.5);
  CHECK(std::abs(a.control - b.control) < 1e-8);
  CHECK(std::abs(a.state - b.state) < 1e-8);
}

TEST_CASE("inhomogeneous control matches the series") {
  const Problem p = tapered(5.0);
  const ContourEvaluator ev(p, QuadratureSpec{});
  const SeriesCoefficients s = make_series(p, 80);
  for (double x : {0.5, 1.6, 2.6}) {
    const ContourPoint pt = ev.eval(x, 0.6);
    CHECK(std::abs(pt.control.real() - series_control_eval(s, x, 0.6)) < 1e-3);
    CHECK(std::abs(pt.control.imag()) < 1e-8);
  }
}

TEST_CASE("homogeneous state matches the series down to early times") {
  // x (pi - x) has modal coefficients 8 / (pi m^3), so M = 200 leaves a tail below 4e-5.
  const Problem p = Problem::make(1.0, pi, SpatialProfile::polynomial(pi, {0.0, pi, -1.0}));
  const ContourEvaluator ev(p, QuadratureSpec{});
  const SeriesCoefficients s = make_series(p, 200);
  for (double t : {1e-3, 0.1})
    for (double x : {0.8, 1.5}) {
      CHECK(std::abs(ev.eval(x, t).state.real() - series_state_eval(s, x, t)) < 1e-4);
      CHECK(std::abs(ev.eval(x, t).control.real() - series_control_eval(s, x, t)) < 1e-4);
    }
  CHECK(std::abs(ev.eval(1.5, 1e-3).state.real() - 1.5 * (pi - 1.5)) < 1e-2);
}

TEST_CASE("state near the boundary follows g0") {
  const TimeSignal g = TimeSignal::constant(1.0, 4.0, 1.0);
  const Problem p = Problem::make(0.0, pi, SpatialProfile::polynomial(pi, {0.0}), BoundarySignal{g, TimeSignal::zero()});
  const ContourEvaluator ev(p, QuadratureSpec{});
  const double near = ev.eval(0.02, 1.0).state.real();
  const double far = ev.eval(0.3, 1.0).state.real();
  CHECK(std::abs(near - 1.0) < 0.05);
  CHECK(far < near);
}

TEST_CASE("homogeneous integrand has no boundary part") {
  const Problem p = single_mode();
  const cd kappa(0.0, 2.0);
  const double x = 1.0, t = 0.5;
  const ContourIntegrands in = contour_integrands(p, kappa, x, t);
  CHECK(in.over_delta2 == cd(0.0));
  const cd ekL = std::exp(cd(0.0, 1.0) * kappa * pi);
  const cd raw = std::exp(-in.omega * t) *
                 (ekL * unified_transform(p.phi0, kappa) * sine_ratio(kappa, x, pi) +
                  unified_transform(p.phi0, -kappa) * sine_ratio(kappa, pi - x, pi));
  CHECK(std::abs(in.scaled1 - raw) < 1e-12 * std::max(1.0, std::abs(raw)));
}

TEST_CASE("invalid evaluation points") {
  const ContourEvaluator ev(single_mode(), QuadratureSpec{});
  CHECK_THROWS_AS(ev.eval(0.0, 0.5), Error);
  CHECK_THROWS_AS(ev.eval(pi, 0.5), Error);
  CHECK_THROWS_AS(ev.eval(1.0, 0.0), Error);
}

TEST_CASE("unknown boundary values integrate to zero") {
  const Problem p = tapered(5.0);
  for (double x : {1.0, 2.0}) {
    const VanishingResult v = vanishing_term_check(p, x, 0.5);
    CHECK(v.converged);
    CHECK(v.residual < 1e-8);
    CHECK(vanishing_term_check(p, x, 0.5, 2.0 * v.radius).residual < 1e-12);
  }
  const VanishingResult wrong = vanishing_term_check(p, 1.0, 0.5, 0.0, 40, -pi / 8);
  CHECK(!(wrong.residual < 1e-3));
}

TEST_CASE("band-limited boundary transform vanishes in the interior") {
  const Dispersion d = Dispersion::reaction_diffusion(1.0);
  const std::vector<cd> g{1.0, 0.5}, h{0.3, -0.2};
  const double a = std::abs(u3_bandlimited_check(d, pi, g, h, pi / 2, 10.0));
  const double b = std::abs(u3_bandlimited_check(d, pi, g, h, pi / 2, 20.0));
  const double c = std::abs(u3_bandlimited_check(d, pi, g, h, pi / 2, 80.0));
  CHECK(b < a);
  CHECK(c < 1e-3 * a);
}

TEST_CASE("arc contributions decay") {
  for (double c : {0.0, 5.0}) {
    const JordanProbe j = jordan_probe(tapered(c), 1.0, 0.5, 10.0);
    CHECK(j.decays);
    CHECK(j.max_abs[2] <= j.max_abs[0]);
  }
}

TEST_CASE("parallel fields match pointwise evaluation") {
  const Problem p = tapered(5.0);
  const std::vector<double> xs{0.5, 1.5}, ts{0.3, 0.8};
  const ContourFields f = contour_fields(p, xs, ts);
  const ContourEvaluator ev(p, QuadratureSpec{});
  for (size_t it = 0; it < ts.size(); ++it)
    for (size_t ix = 0; ix < xs.size(); ++ix) {
      const ContourPoint pt = ev.eval(xs[ix], ts[it]);
      CHECK(f.control.at(it, ix) == pt.control);
      CHECK(f.state.at(it, ix) == pt.state);
    }
}
