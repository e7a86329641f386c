#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "uftlqr/spectral.hpp"

namespace uftlqr {

// Frequency-domain boundary input v(k, tau) at one real frequency k.
struct FrequencyInput {
  std::function<cd(double)> v;
  // d v / d tau; required by the finite-horizon Riccati system when v != 0
  std::function<cd(double)> dv;
  // v vanishes for tau >= vanish_time
  double vanish_time = 0.0;

  bool is_zero() const { return !v; }
  cd operator()(double tau) const { return (v && tau < vanish_time) ? v(tau) : cd(0.0); }
  cd derivative(double tau) const { return (dv && tau < vanish_time) ? dv(tau) : cd(0.0); }
};

using Matrix23d = Eigen::Matrix<double, 2, 3>;

struct RealizedSystem {
  Eigen::Matrix2d A;
  Eigen::Matrix2d B;
  Matrix23d C;
  // D(t) maps [v_Re, v_Im, 1] to its time derivative.
  std::function<Eigen::Matrix3d(double)> D;
};

RealizedSystem realize(const Dispersion& d, double k, const FrequencyInput& v);

enum class TerminalKind { FiniteHorizonIdentity, InfiniteHorizonZero };

struct RiccatiSolution {
  std::vector<double> t;
  std::vector<Eigen::Matrix2d> P;
  std::vector<Matrix23d> R;
  TerminalKind kind = TerminalKind::FiniteHorizonIdentity;
  // max |fine - coarse| / 15 over the returned nodes
  double error_estimate = 0.0;
};

// Backward RK4 of
//   -P_t = I - P B B^T P + P A + A^T P
//   -R_t = P C + R D + A^T R - P B B^T R
// from P(T) = I, R(T) = 0. With InfiniteHorizonZero P is frozen at phat I
// and only R is integrated. Returns the nodes of step T / steps, computed at
// half that step; the coarse run supplies the error estimate.
RiccatiSolution solve_riccati_finite(const Dispersion& d, double k, double T, const FrequencyInput& v,
                                     TerminalKind kind = TerminalKind::FiniteHorizonIdentity,
                                     int steps = 4000);

struct FrequencyGain {
  double k = 0.0;
  double phat = 0.0;
  cd omega;
  cd omegabar;
};

FrequencyGain infinite_horizon_gain(const Dispersion& d, double k);

// I - P^2 + P A + A^T P at P = phat I.
Eigen::Matrix2d are_residual(const Dispersion& d, double k);

// -(A^T - P)^{-1} P at P = phat I.
Eigen::Matrix2d rtilde_equilibrium(const Dispersion& d, double k);

// R~(t) for the frozen-gain system with R~(T) = 0, via the matrix exponential
// of A^T - P (a scaled rotation).
Eigen::Matrix2d rtilde_closed_form(const Dispersion& d, double k, double T, double t);

// int_t^tbar e^{omegabar (t - tau)} v(tau) d tau
cd feedforward_integral(const FrequencyGain& g, const FrequencyInput& v, double t);

struct ClosedLoopTrajectory {
  std::vector<double> t;
  std::vector<cd> phi;
  double error_estimate = 0.0;
};

// phi_t = -omega phi + v - phat F(t) with F the feedforward integral, by an
// exponential integrator (exact linear part, trapezoidal forcing) and one
// Richardson halving. t_grid must be non-negative and increasing.
ClosedLoopTrajectory closedloop_solve(const FrequencyGain& g, cd phi0, const FrequencyInput& v,
                                      const std::vector<double>& t_grid, double max_step = 1e-3);

cd control_from_state(const FrequencyGain& g, cd phi, const FrequencyInput& v, double t);

// Trapezoid-discretized cost int_0^T (|phi|^2 + |u|^2) dt for u = -gain phi,
// v = 0, phi(0) = 1.
double frequency_cost(const Dispersion& d, double k, double gain, double T, int steps = 20000);

}  // namespace uftlqr
