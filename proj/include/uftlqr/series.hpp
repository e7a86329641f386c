#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "uftlqr/problem.hpp"

namespace uftlqr {

// Boundary-driven pieces of mode m at time t.
struct BoundaryCoeffs {
  // e^{-omega t} b_m(t), with b_m = (2/L) k_m (g_check - (-1)^m h_check)
  cd b_scaled;
  // (2/L) k_m (g0(t) - (-1)^m h0(t)); boundary-supported, left out of sums
  cd b_inst;
  // -(2/L) k_m phat (G_m(t) - (-1)^m H_m(t)), G the future integral
  cd b_ff;
  // b_inst + b_ff
  cd b_underline;
  double omega = 0.0;
  double t = 0.0;

  // Unscaled b_m(t); throws OverflowGuard when omega t > 700.
  cd b() const;
};

// (2/L) int_0^L sin(k_m xi) phi0(xi) d xi, any integer m.
double modal_coeff(const SpatialProfile& phi0, int m);
// m = 1..M
std::vector<double> modal_coeffs(const SpatialProfile& phi0, int M);

BoundaryCoeffs boundary_coeffs(const BoundarySignal& bc, const Dispersion& d, double L, int m, double t);

struct SeriesCoefficients {
  Problem problem;
  int M = 0;
  std::vector<double> k;      // k_m = pi m / L
  std::vector<double> phi0;   // phi_m^o
  std::vector<double> omega;  // omega(k_m)
  std::vector<double> phat;   // phat(k_m)

  BoundaryCoeffs boundary(int m, double t) const;
  // (i/2) e^{-omega t} (-phi_m^o - b_m)
  cd psi(int m, double t) const;

  // Per-mode state and control amplitudes at time t, m = 1..M:
  // phi = sum state[m] sin(k_m x), u = sum control[m] sin(k_m x).
  void amplitudes(double t, std::vector<double>& state, std::vector<double>& control) const;
};

SeriesCoefficients make_series(const Problem& p, int M);

double series_state_eval(const SeriesCoefficients& s, double x, double t);
double series_control_eval(const SeriesCoefficients& s, double x, double t);

// Gamma(x, xi) = phat(0) + 2 sum_{m=1}^M phat(k_m) cos(k_m (x - xi))
double kernel_eval(const Dispersion& d, double L, int M, double x, double xi);

struct KernelMatrix {
  std::vector<double> x, xi;
  Eigen::MatrixXd toeplitz;  // Gamma(x, xi)
  Eigen::MatrixXd hankel;    // Gamma(x, -xi)
  Eigen::MatrixXd combined;  // (Gamma(x, xi) - Gamma(x, -xi)) / (2L)
};

// n x n samples on [0, L] x [0, L].
KernelMatrix build_kernel_matrix(const Dispersion& d, double L, int M, int n);
// Samples on arbitrary node sets.
KernelMatrix build_kernel_matrix(const Dispersion& d, double L, int M, const std::vector<double>& x,
                                 const std::vector<double>& xi);

struct StateRow {
  std::vector<double> xi;
  std::vector<double> phi;
};

// -int_0^L (Gamma(x,xi) - Gamma(x,-xi)) phi(xi) d xi / (2L) + sum sin(k_m x) b_ff_m(t)
// by the trapezoid rule on the row's nodes.
double feedback_control_eval(const SeriesCoefficients& s, const StateRow& row, double x, double t);

struct ToeplitzHankelParts {
  Eigen::MatrixXd toeplitz;
  Eigen::MatrixXd hankel;
  double max_diagonal_deviation = 0.0;
  double max_antidiagonal_deviation = 0.0;
};

ToeplitzHankelParts toeplitz_hankel_decompose(const KernelMatrix& km);

// Half width at half maximum of the Toeplitz profile, read off the first
// column with linear interpolation.
double toeplitz_lobe_width(const KernelMatrix& km);

// Share of sum |Gamma(x,-xi)| on nodes within frac * L of the corners
// (0,0) and (L,L), where the Hankel part peaks.
double hankel_corner_mass_fraction(const KernelMatrix& km, double frac = 0.1);

}  // namespace uftlqr
