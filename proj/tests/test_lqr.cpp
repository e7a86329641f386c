#include <doctest.h>

#include <cmath>
#include <numbers>

#include "uftlqr/lqr.hpp"

using namespace uftlqr;
using std::numbers::pi;

TEST_CASE("infinite horizon gain examples") {
  const auto g0 = infinite_horizon_gain(Dispersion::reaction_diffusion(0.0), 0.0);
  CHECK(std::abs(g0.phat - 1.0) < 1e-15);
  CHECK(std::abs(g0.omega - 1.0) < 1e-15);
  const auto g1 = infinite_horizon_gain(Dispersion::reaction_diffusion(0.0), 1.0);
  CHECK(std::abs(g1.phat - (std::sqrt(2.0) - 1.0)) < 1e-15);
  CHECK(std::abs(g1.omega - std::sqrt(2.0)) < 1e-15);
  const auto g2 = infinite_horizon_gain(Dispersion::reaction_diffusion(5.0), 2.0);
  CHECK(std::abs(g2.phat - (-9.0 + std::sqrt(82.0))) < 1e-14);
  CHECK(std::abs(g2.omega - std::sqrt(82.0)) < 1e-13);
  CHECK(std::abs(g2.omegabar - std::sqrt(82.0)) < 1e-13);
}

TEST_CASE("finite horizon Riccati: terminal data and convergence") {
  for (double c : {0.0, 5.0}) {
    const Dispersion d = Dispersion::reaction_diffusion(c);
    for (double k : {0.0, 1.0, 2.0}) {
      const double ph = infinite_horizon_gain(d, k).phat;
      double prev = 1e300;
      for (double T : {5.0, 10.0, 20.0}) {
        const RiccatiSolution s = solve_riccati_finite(d, k, T, FrequencyInput{});
        CHECK((s.P.back() - Eigen::Matrix2d::Identity()).norm() == 0.0);
        CHECK(s.R.back().norm() == 0.0);
        CHECK(std::abs(s.P.front()(0, 1) - s.P.front()(1, 0)) < 1e-10);
        const double err = (s.P.front() - ph * Eigen::Matrix2d::Identity()).norm();
        CHECK(err <= prev);
        prev = err;
        if (T == 20.0) CHECK(err <= 1e-6);
      }
      CHECK(are_residual(d, k).norm() <= 1e-10);
    }
  }
}

TEST_CASE("scalar Riccati at k = 0, c = 0 against the tanh solution") {
  // -p' = 1 - p^2 with p(T) = 1 stays at the root 1.
  const RiccatiSolution s = solve_riccati_finite(Dispersion::reaction_diffusion(0.0), 0.0, 20.0, FrequencyInput{});
  for (const auto& P : s.P) CHECK(std::abs(P(0, 0) - 1.0) < 1e-12);
  // With A = -a the solution from P(T)=1 approaches -a + sqrt(a^2+1).
  const Dispersion d = Dispersion::reaction_diffusion(0.0);
  const double a = 1.0, root = -a + std::sqrt(a * a + 1.0), T = 3.0;
  const RiccatiSolution s1 = solve_riccati_finite(d, 1.0, T, FrequencyInput{});
  const double q = std::sqrt(a * a + 1.0);
  for (size_t i = 0; i < s1.t.size(); i += 500) {
    // p(t) = root + 2q / (C e^{2q(T-t)} - 1) with C fixed by p(T) = 1
    const double C = 1.0 + 2.0 * q / (1.0 - root);
    const double p = root + 2.0 * q / (C * std::exp(2.0 * q * (T - s1.t[i])) - 1.0);
    CHECK(std::abs(s1.P[i](0, 0) - p) < 1e-9);
  }
}

TEST_CASE("R-tilde equilibrium and closed form") {
  for (double c : {0.0, 5.0}) {
    const Dispersion d = Dispersion::reaction_diffusion(c);
    for (double k : {0.0, 1.5}) {
      const Eigen::Matrix2d eq = rtilde_equilibrium(d, k);
      CHECK((rtilde_closed_form(d, k, 60.0, 0.0) - eq).norm() < 1e-10);
      CHECK(rtilde_closed_form(d, k, 5.0, 5.0).norm() < 1e-15);
    }
  }
}

TEST_CASE("feedforward integral examples") {
  const auto g = infinite_horizon_gain(Dispersion::reaction_diffusion(0.0), 0.0);
  const double tbar = 2.0;
  FrequencyInput v{[](double) { return cd(1.0); }, [](double) { return cd(0.0); }, tbar};
  CHECK(std::abs(feedforward_integral(g, FrequencyInput{}, 0.3)) == 0.0);
  CHECK(std::abs(feedforward_integral(g, v, 2.5)) == 0.0);
  CHECK(std::abs(feedforward_integral(g, v, 0.0) - (1.0 - std::exp(-tbar))) < 1e-12);
}

TEST_CASE("closed loop: homogeneous decay and zero trajectory") {
  const auto g = infinite_horizon_gain(Dispersion::reaction_diffusion(0.0), 1.0);
  const auto tr = closedloop_solve(g, 1.0, FrequencyInput{}, {0.0, 0.5, 1.0});
  CHECK(std::abs(tr.phi.back() - std::exp(-std::sqrt(2.0))) < 1e-10);
  const auto z = closedloop_solve(g, 0.0, FrequencyInput{}, {0.0, 1.0});
  for (const cd& p : z.phi) CHECK(p == cd(0.0));
  CHECK(std::abs(control_from_state(g, 1.0, FrequencyInput{}, 0.0) + (std::sqrt(2.0) - 1.0)) < 1e-15);
  CHECK(control_from_state(g, 0.0, FrequencyInput{}, 0.0) == cd(0.0));
}

TEST_CASE("closed loop with a step input against the direct quadrature form") {
  const auto g = infinite_horizon_gain(Dispersion::reaction_diffusion(0.0), 1.0);
  const double tbar = 1.5;
  FrequencyInput v{[](double) { return cd(1.0); }, [](double) { return cd(0.0); }, tbar};
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(0.05 * i);
  const auto tr = closedloop_solve(g, 0.3, v, ts);
  const double w = g.omega.real(), ph = g.phat;
  GkOptions o;
  o.abs_tol = 1e-14;
  for (size_t i = 0; i < ts.size(); i += 8) {
    const double t = ts[i];
    // phi(t) = e^{-w t} phi0 + int_0^t e^{-w(t-s)} (v(s) - phat F(s)) ds
    auto F = [&](double s) { return s >= tbar ? 0.0 : (1.0 - std::exp(w * (s - tbar))) / w; };
    auto vs = [&](double s) { return s < tbar ? 1.0 : 0.0; };
    const double forced =
        integrate_gk([&](double s) { return cd(std::exp(-w * (t - s)) * (vs(s) - ph * F(s))); }, 0.0,
                     std::min(t, tbar), o).value.real() +
        (t > tbar ? integrate_gk([&](double s) { return cd(-std::exp(-w * (t - s)) * ph * F(s)); }, tbar, t, o)
                        .value.real()
                  : 0.0);
    CHECK(std::abs(tr.phi[i] - (std::exp(-w * t) * 0.3 + forced)) < 1e-8);
  }
}

TEST_CASE("optimal control identity along the closed loop") {
  const auto g = infinite_horizon_gain(Dispersion::reaction_diffusion(5.0), 0.8);
  const double tbar = 3.0;
  FrequencyInput v{[](double t) { return cd(std::sin(t), 0.5 * std::cos(2.0 * t)); },
                   [](double t) { return cd(std::cos(t), -std::sin(2.0 * t)); }, tbar};
  std::vector<double> ts;
  for (int i = 0; i <= 400; ++i) ts.push_back(0.005 * i);
  const auto tr = closedloop_solve(g, cd(0.4, -0.1), v, ts);
  const double w = 0.8 * 0.8 + 5.0;
  for (size_t i = 50; i < 350; i += 50) {
    const double h = ts[i + 1] - ts[i];
    const cd dphi = (-tr.phi[i + 2] + 8.0 * tr.phi[i + 1] - 8.0 * tr.phi[i - 1] + tr.phi[i - 2]) / (12.0 * h);
    const cd u = control_from_state(g, tr.phi[i], v, ts[i]);
    CHECK(std::abs(u - (dphi + w * tr.phi[i] - v(ts[i]))) < 1e-6);
  }
}

TEST_CASE("perturbing the gain increases the cost") {
  const Dispersion d = Dispersion::reaction_diffusion(0.0);
  for (double k : {0.0, 1.0, 2.0}) {
    const double ph = infinite_horizon_gain(d, k).phat;
    const double base = frequency_cost(d, k, ph, 30.0);
    CHECK(frequency_cost(d, k, 1.1 * ph, 30.0) > base);
    CHECK(frequency_cost(d, k, 0.9 * ph, 30.0) > base);
  }
}
