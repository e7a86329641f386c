#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uftlqr/errors.hpp"
#include "uftlqr/transforms.hpp"

using namespace uftlqr;
using std::numbers::pi;

namespace {
const cd I(0.0, 1.0);

// Brute-force nested quadrature of int_0^t e^{k tau} int_tau^tbar e^{kb (tau - r)} s(r) dr dtau.
cd nested_oracle(const TimeSignal& s, cd k, cd kb, double t) {
  GkOptions o;
  o.abs_tol = 1e-13;
  o.initial_panels = 8;
  auto inner = [&](double tau) {
    return integrate_gk([&](double r) { return std::exp(kb * (tau - r)) * s(r); }, tau, s.vanish_time(), o).value;
  };
  return integrate_gk([&](double tau) { return std::exp(k * tau) * inner(tau); }, 0.0, t, o).value;
}
}  // namespace

TEST_CASE("unified transform examples") {
  const SpatialProfile one = SpatialProfile::polynomial(1.0, {1.0});
  CHECK(std::abs(unified_transform(one, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(unified_transform(one, 2.0 * pi)) < 1e-15);
  const SpatialProfile s = SpatialProfile::sine(pi, 1.0, 1.0);
  CHECK(std::abs(unified_transform(s, 0.0) - 2.0) < 1e-14);
  for (cd k : {cd(0.3, 0.0), cd(2.5, -0.7), cd(-1.7, 1.2), cd(0.0, 2.0)}) {
    const cd exact = (1.0 + std::exp(-I * k * pi)) / (1.0 - k * k);
    CHECK(std::abs(unified_transform(s, k) - exact) < 1e-12 * (1.0 + std::abs(exact)));
  }
  // Closed form against the tabulated path on the same profile.
  std::vector<double> xs, ys;
  for (int i = 0; i <= 400; ++i) {
    xs.push_back(pi * i / 400.0);
    ys.push_back(std::sin(xs.back()));
  }
  const SpatialProfile tab = SpatialProfile::tabulated(pi, xs, ys);
  CHECK(std::abs(unified_transform(tab, 1.3) - unified_transform(s, 1.3)) < 1e-7);
}

TEST_CASE("reflected transform agrees and stays bounded") {
  const SpatialProfile p = SpatialProfile::polynomial(2.0, {0.5, -1.0, 0.25});
  const cd k(0.8, 0.6);
  CHECK(std::abs(reflected_transform(p, k) - std::exp(I * k * 2.0) * unified_transform(p, k)) < 1e-13);
  CHECK(std::abs(reflected_transform(p, cd(40.0, 300.0))) < 1.0);
}

TEST_CASE("inverse transform examples") {
  const SpatialProfile one = SpatialProfile::polynomial(1.0, {1.0});
  const auto r1 = inverse_transform([&](double k) { return unified_transform(one, k); }, 0.5, 4000.0);
  CHECK(std::abs(r1.value - 1.0) < 1e-3);
  CHECK(std::abs(inverse_transform([](double) { return cd(0.0); }, 0.5, 50.0).value) == 0.0);
  const SpatialProfile s = SpatialProfile::sine(pi, 1.0, 1.0);
  const auto r2 = inverse_transform([&](double k) { return unified_transform(s, k); }, pi / 2.0, 2000.0);
  CHECK(std::abs(r2.value - 1.0) < 1e-6);
}

TEST_CASE("t transform examples") {
  const TimeSignal one = TimeSignal::constant(1.0, 10.0, 1.0);
  const cd k(0.3, -0.4);
  CHECK(std::abs(t_transform(one, k, 2.0) - (std::exp(k * 2.0) - 1.0) / k) < 1e-13);
  CHECK(std::abs(t_transform(one, 0.0, 2.0) - 2.0) < 1e-13);
  CHECK(t_transform(TimeSignal::zero(), k, 2.0) == cd(0.0));
  const TimeSignal sn = TimeSignal::sine(1.0, 1.0, 10.0, 2.0);
  CHECK(std::abs(t_transform(sn, 1.0, pi) - (std::exp(pi) + 1.0) / 2.0) < 1e-11);
  CHECK_THROWS_AS(t_transform(sn, 800.0, 1.0), Error);
}

TEST_CASE("t transform splits over adjacent intervals") {
  const TimeSignal s = TimeSignal::sine(2.0, 0.7, 6.0, 1.5);
  const cd k(-0.4, 1.3);
  const double t1 = 1.2, t2 = 4.1;
  const cd whole = t_transform(s, k, t1 + t2);
  const cd split = t_transform(s, k, t1) + std::exp(k * t1) * s.exp_moment(k, t1, t1 + t2, t1);
  CHECK(std::abs(whole - split) < 1e-10);
}

TEST_CASE("future weighted transform examples") {
  const double tbar = 3.0;
  // Taper confined to [2.9, 3]; t stays well before it.
  const TimeSignal step = TimeSignal::constant(1.0, tbar, 0.1);
  CHECK(future_weighted_transform(TimeSignal::zero(), 1.0, 1.0, 1.0) == cd(0.0));
  CHECK(std::abs(future_weighted_transform(step, 1.0, 1.0, 0.0)) < 1e-15);
  const double t = 1.4;
  GkOptions o;
  o.abs_tol = 1e-14;
  const double tail = integrate_gk([&](double r) { return cd(std::exp(-r) * step(r)); }, 0.0, tbar, o).value.real();
  // For tau < t the inner integral is tail - (1 - e^{-tau}).
  const double exact = (tail - 1.0) * (std::exp(2.0 * t) - 1.0) / 2.0 + (std::exp(t) - 1.0);
  CHECK(std::abs(future_weighted_transform(step, 1.0, 1.0, t) - exact) < 1e-10);
  // Plateau past the vanish time.
  const TimeSignal sn = TimeSignal::sine(1.0, 1.0, 2.0, 0.5);
  CHECK(std::abs(future_weighted_transform(sn, 0.5, 0.7, 2.5) - future_weighted_transform(sn, 0.5, 0.7, 4.0)) <
        1e-12);
}

TEST_CASE("check transform against nested quadrature") {
  const Dispersion heat = Dispersion::reaction_diffusion(0.0);
  const TimeSignal s = TimeSignal::sine(1.0, 1.0, 2.0 * pi, 1.0);
  CHECK(check_transform(TimeSignal::zero(), heat, 1.0, 0.5) == cd(0.0));
  CHECK(std::abs(check_transform(s, heat, 1.0, 0.0)) < 1e-15);
  const cd om = omega_eval(heat, 1.0), ph = phat_eval(heat, 1.0);
  const cd oracle = t_transform(s, om, 0.5) - ph * nested_oracle(s, om, om, 0.5);
  CHECK(std::abs(check_transform(s, heat, 1.0, 0.5) - oracle) < 1e-8);
}

TEST_CASE("scaled transforms match their unscaled definitions") {
  const TimeSignal s = TimeSignal::sine(1.0, 1.0, 2.0 * pi, 1.0);
  const cd om(2.2, 0.9), ob(2.2, -0.9);
  const double t = 0.8;
  CHECK(std::abs(past_scaled(s, om, t) - std::exp(-om * t) * t_transform(s, om, t)) < 1e-12);
  CHECK(std::abs(underline_scaled(s, om, ob, t) - std::exp(-om * t) * future_weighted_transform(s, om, ob, t)) <
        1e-11);
  CHECK(std::abs(future_integral(s, ob, 7.0)) == 0.0);
}

TEST_CASE("transforms are linear in the signal") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    const double a = u(rng), b = u(rng), f = 1.0 + u(rng);
    const TimeSignal s1 = TimeSignal::sine(f, 1.0, 5.0, 1.0), s2 = TimeSignal::constant(1.0, 5.0, 1.0);
    std::vector<double> ts, vs;
    for (int i = 0; i <= 500; ++i) {
      ts.push_back(5.0 * i / 500.0);
      vs.push_back(a * s1.base(ts.back()) + b * s2.base(ts.back()));
    }
    const TimeSignal comb = TimeSignal::tabulated(ts, vs, 5.0, 1.0);
    const cd k(0.5, 2.0);
    const cd lhs = t_transform(comb, k, 3.0);
    const cd rhs = a * t_transform(s1, k, 3.0) + b * t_transform(s2, k, 3.0);
    CHECK(std::abs(lhs - rhs) < 1e-6);
  }
}

TEST_CASE("v_eval examples") {
  const Dispersion heat = Dispersion::reaction_diffusion(0.0);
  const double L = 1.5;
  CHECK(v_eval(heat, L, {0.0, 0.0}, {0.0, 0.0}, 0.7) == cd(0.0));
  CHECK(std::abs(v_eval(heat, L, {0.0, 1.0}, {0.0, 0.0}, 0.7) + 1.0) < 1e-15);
  const double k = 0.7;
  CHECK(std::abs(v_eval(heat, L, {0.0, 0.0}, {0.0, 1.0}, k) - std::exp(-I * k * L)) < 1e-15);
}

TEST_CASE("transform cache hits reproduce recomputation bit for bit") {
  TransformCache cache;
  const TimeSignal s = TimeSignal::sine(1.0, 1.0, 2.0 * pi, 1.0);
  const cd om(3.1, 0.4);
  const cd a = cache.past_scaled(s, om, 0.6);
  const cd b = cache.past_scaled(s, om, 0.6);
  CHECK(a == b);
  CHECK(a == past_scaled(s, om, 0.6));
  CHECK(cache.hits() == 1);
  CHECK(cache.future_integral(s, om, 0.6) == future_integral(s, om, 0.6));
}

TEST_CASE("signal validation") {
  CHECK_THROWS_AS(TimeSignal::sine(1.0, 1.0, 1.0, 0.0), Error);
  CHECK_THROWS_AS(TimeSignal::constant(1.0, 1.0, 2.0), Error);
  CHECK_NOTHROW(TimeSignal::sine(1.0, 1.0, pi, 0.0));
  const TimeSignal s = TimeSignal::sine(1.0, 1.0, 2.0, 0.5);
  CHECK(s(2.0) == 0.0);
  CHECK(s(3.0) == 0.0);
  CHECK(std::abs(s(1.0) - std::sin(1.0)) < 1e-15);
}
