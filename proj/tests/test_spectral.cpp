#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "uftlqr/errors.hpp"
#include "uftlqr/spectral.hpp"

using namespace uftlqr;
using std::numbers::pi;

TEST_CASE("w_eval examples") {
  CHECK(std::abs(w_eval(Dispersion::reaction_diffusion(0.0), 2.0) - cd(4.0)) < 1e-15);
  CHECK(std::abs(w_eval(Dispersion::reaction_diffusion(5.0), cd(0.0, 1.0)) - cd(4.0)) < 1e-15);
  const Dispersion quartic = Dispersion::from_coeffs({0.0, 0.0, 0.0, 0.0, 1.0});
  CHECK(std::abs(w_eval(quartic, cd(1.0, 1.0)) - cd(-4.0)) < 1e-13);
}

TEST_CASE("Dispersion rejects ill-posed or degenerate polynomials") {
  CHECK_THROWS_AS(Dispersion::from_coeffs({0.0, 0.0, -1.0}), Error);
  CHECK_THROWS_AS(Dispersion::from_coeffs({1.0, 0.0, 0.0}), Error);
  CHECK(Dispersion::from_coeffs({0.0, 0.0, 1.0, cd(0.0, 0.0), 0.0, 0.0}).order >= 2);
}

TEST_CASE("c_coeffs examples") {
  for (double c : {0.0, 5.0}) {
    const auto cj = c_coeffs(Dispersion::reaction_diffusion(c));
    REQUIRE(cj.size() == 2);
    const cd k(0.7, -0.3);
    CHECK(std::abs(cj[0](k) - cd(0.0, 1.0) * k) < 1e-14);
    CHECK(std::abs(cj[1](k) - cd(1.0)) < 1e-14);
  }
  const auto q = c_coeffs(Dispersion::from_coeffs({0.0, 0.0, 0.0, 0.0, 1.0}));
  const cd k(0.4, 0.9);
  for (int j = 0; j < 4; ++j) {
    const cd expect = std::pow(cd(0.0, 1.0), 3 * j + 1) * std::pow(k, 3 - j);
    CHECK(std::abs(q[j](k) - expect) < 1e-12);
  }
}

TEST_CASE("c_coeffs reproduce w through the divided difference") {
  const Dispersion d = Dispersion::from_coeffs({1.0, 0.0, 2.0, 0.0, 1.0});
  const auto cj = c_coeffs(d);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    const cd k(u(rng), u(rng)), l(u(rng), u(rng));
    cd sum = 0.0;
    for (size_t j = 0; j < cj.size(); ++j) sum += cj[j](k) * std::pow(cd(0.0, 1.0) * l, static_cast<int>(j));
    CHECK(std::abs(sum * (k - l) / cd(0.0, 1.0) + w_eval(d, l) - w_eval(d, k)) < 1e-10);
  }
}

TEST_CASE("omega and phat examples") {
  const Dispersion heat = Dispersion::reaction_diffusion(0.0);
  CHECK(std::abs(omega_eval(heat, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(omega_eval(heat, 1.0) - std::sqrt(2.0)) < 1e-15);
  CHECK(std::abs(phat_eval(heat, 0.0) - 1.0) < 1e-15);
  CHECK(std::abs(phat_eval(heat, 1.0) - (std::sqrt(2.0) - 1.0)) < 1e-15);
  CHECK(std::abs(phat_eval(Dispersion::reaction_diffusion(5.0), 0.0) - (-5.0 + std::sqrt(26.0))) < 1e-14);
  // Approaching the branch point e^{i pi/4} from inside its cut radius.
  const cd kb = std::polar(1.0 - 1e-8, pi / 4.0);
  CHECK(std::abs(omega_eval(heat, kb)) < 1e-3);
  CHECK_THROWS_AS(omega_eval(heat, std::polar(2.0, pi / 4.0)), Error);
}

TEST_CASE("gain identities on the real line") {
  for (double c : {0.0, 0.5, 5.0}) {
    const Dispersion d = Dispersion::reaction_diffusion(c);
    for (double k = -30.0; k <= 30.0; k += 0.37) {
      const OmegaPhat op = omega_phat(d, k);
      const double wr = k * k + c;
      CHECK(op.phat.real() > 0.0);
      CHECK(op.phat.real() <= 1.0);
      CHECK(std::abs(op.phat * (wr + std::sqrt(wr * wr + 1.0)) - 1.0) < 1e-12);
      CHECK(std::abs(op.omega - wr - op.phat) < 1e-12 * (1.0 + wr));
    }
  }
}

TEST_CASE("omega and phat are even off the real line") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (double c : {0.0, 5.0}) {
    const Dispersion d = Dispersion::reaction_diffusion(c);
    const BranchCutSet cuts = branch_cuts(d);
    int tested = 0;
    while (tested < 30) {
      const cd k(u(rng), u(rng));
      if (cuts.distance(k) < 1e-3) continue;
      CHECK(std::abs(omega_eval(d, k) - omega_eval(d, -k)) < 1e-12 * (1.0 + std::abs(k * k)));
      CHECK(std::abs(phat_eval(d, k) - phat_eval(d, -k)) < 1e-12 * (1.0 + std::abs(k * k)));
      ++tested;
    }
  }
}

TEST_CASE("branch points of the reaction-diffusion dispersion") {
  for (double c : {0.0, 1.0, 5.0}) {
    const BranchCutSet b = branch_cuts(Dispersion::reaction_diffusion(c));
    REQUIRE(b.branch_points.size() == 4);
    for (const cd& z : b.branch_points) {
      CHECK(std::abs(std::abs(z) - std::pow(c * c + 1.0, 0.25)) < 1e-10);
      CHECK(std::abs((z * z + c) * (z * z + c) + 1.0) < 1e-9);
    }
  }
}

TEST_CASE("contour angles and admissibility") {
  const QuadratureSpec q;
  auto angles = [&](double c) {
    const ContourFamily f = build_contour(Dispersion::reaction_diffusion(c), q);
    return std::pair{f.rays[0].angle, f.rays[1].angle};
  };
  auto [l0, r0] = angles(0.0);
  CHECK(std::abs(r0 - pi / 8.0) < 1e-15);
  CHECK(std::abs(l0 - 7.0 * pi / 8.0) < 1e-15);
  auto [l1, r1] = angles(1.0);
  CHECK(std::abs(r1 - pi / 16.0) < 1e-15);
  CHECK(std::abs(l1 - 15.0 * pi / 16.0) < 1e-15);
  for (double c : {0.0, 0.5, 1.0, 5.0}) {
    const ContourFamily f = build_contour(Dispersion::reaction_diffusion(c), q);
    CHECK(f.admissibility.min_re_omega > 0.0);
    CHECK(f.admissibility.min_cut_distance > 0.0);
    CHECK(f.rays[0].orientation == -1);
    CHECK(f.rays[1].orientation == 1);
  }
}

TEST_CASE("omega is continuous along contour rays") {
  const Dispersion d = Dispersion::reaction_diffusion(5.0);
  const double th = contour_angle(5.0);
  double prev_jump = 1e300;
  for (int n : {200, 400, 800}) {
    double jump = 0.0;
    cd prev = omega_eval(d, std::polar(1e-4, th));
    for (int i = 1; i <= n; ++i) {
      const cd cur = omega_eval(d, std::polar(1e-4 + 30.0 * i / n, th));
      jump = std::max(jump, std::abs(cur - prev));
      prev = cur;
    }
    CHECK(jump < prev_jump);
    prev_jump = jump;
  }
}

TEST_CASE("delta and sine ratio") {
  CHECK(std::abs(delta_eval(pi, 1.0)) < 1e-14);
  CHECK(std::abs(delta_eval(pi / 2.0, 1.0) - cd(0.0, 2.0)) < 1e-15);
  CHECK(std::abs(delta_eval(cd(0.0, 1.0), pi) - cd(-2.0 * std::sinh(pi))) < 1e-12);
  const double L = 2.0;
  for (cd k : {cd(0.3, 0.2), cd(-1.1, 0.4), cd(5.0, 3.0), cd(2e-4, 1e-4), cd(1e-6, 0.0)}) {
    for (double a : {0.0, 0.5, 1.3, 2.0}) {
      const cd ref = std::abs(k) < 1e-5 ? cd(a / L) : std::sin(k * a) / std::sin(k * L);
      CHECK(std::abs(sine_ratio(k, a, L) - ref) < 1e-11 * (1.0 + std::abs(ref)));
    }
  }
}
