#include "uftlqr/series.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "uftlqr/errors.hpp"
#include "uftlqr/lqr.hpp"

namespace uftlqr {
namespace {

constexpr double kPi = std::numbers::pi;

double parity(int m) { return (m % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

cd BoundaryCoeffs::b() const {
  if (omega * t > 700.0) throw Error(ErrorKind::OverflowGuard, "e^{omega t} overflows; use b_scaled");
  return std::exp(omega * t) * b_scaled;
}

double modal_coeff(const SpatialProfile& phi0, int m) {
  if (m == 0) return 0.0;
  const double L = phi0.length();
  const double k = kPi * m / L;
  const cd sine_moment = (unified_transform(phi0, -k) - unified_transform(phi0, k)) / cd(0.0, 2.0);
  return 2.0 / L * sine_moment.real();
}

std::vector<double> modal_coeffs(const SpatialProfile& phi0, int M) {
  if (M < 1) throw config_error("series.M", "must be >= 1");
  std::vector<double> out(M);
  for (int m = 1; m <= M; ++m) out[m - 1] = modal_coeff(phi0, m);
  return out;
}

BoundaryCoeffs boundary_coeffs(const BoundarySignal& bc, const Dispersion& d, double L, int m, double t) {
  if (t < 0.0) throw config_error("t", "time must be >= 0");
  const double k = kPi * m / L;
  const FrequencyGain g = infinite_horizon_gain(d, k);
  BoundaryCoeffs out;
  out.omega = g.omega.real();
  out.t = t;
  if (bc.homogeneous() || m == 0) return out;
  const double sgn = parity(m);
  const double scale = 2.0 / L * k;
  auto check_scaled = [&](const TimeSignal& s) {
    return past_scaled(s, g.omega, t) - g.phat * underline_scaled(s, g.omega, g.omegabar, t);
  };
  out.b_scaled = scale * (check_scaled(bc.g0) - sgn * check_scaled(bc.h0));
  out.b_inst = scale * (bc.g0(t) - sgn * bc.h0(t));
  out.b_ff = -scale * g.phat *
             (future_integral(bc.g0, g.omegabar, t) - sgn * future_integral(bc.h0, g.omegabar, t));
  out.b_underline = out.b_inst + out.b_ff;
  return out;
}

SeriesCoefficients make_series(const Problem& p, int M) {
  if (M < 1) throw config_error("series.M", "must be >= 1");
  SeriesCoefficients s;
  s.problem = p;
  s.M = M;
  s.phi0 = modal_coeffs(p.phi0, M);
  for (int m = 1; m <= M; ++m) {
    const double k = kPi * m / p.L;
    const FrequencyGain g = infinite_horizon_gain(p.d, k);
    s.k.push_back(k);
    s.omega.push_back(g.omega.real());
    s.phat.push_back(g.phat);
  }
  return s;
}

BoundaryCoeffs SeriesCoefficients::boundary(int m, double t) const {
  return boundary_coeffs(problem.bc, problem.d, problem.L, m, t);
}

cd SeriesCoefficients::psi(int m, double t) const {
  const int am = std::abs(m);
  const double sign = m < 0 ? -1.0 : 1.0;
  const double phim = sign * phi0.at(am - 1);
  const BoundaryCoeffs b = boundary(m, t);
  return cd(0.0, 0.5) * (-std::exp(-omega.at(am - 1) * t) * phim - b.b_scaled);
}

void SeriesCoefficients::amplitudes(double t, std::vector<double>& state, std::vector<double>& control) const {
  state.assign(M, 0.0);
  control.assign(M, 0.0);
  for (int m = 1; m <= M; ++m) {
    const BoundaryCoeffs b = boundary(m, t);
    const double a = std::exp(-omega[m - 1] * t) * phi0[m - 1] + b.b_scaled.real();
    state[m - 1] = a;
    control[m - 1] = -phat[m - 1] * a + b.b_ff.real();
  }
}

double series_state_eval(const SeriesCoefficients& s, double x, double t) {
  std::vector<double> a, c;
  s.amplitudes(t, a, c);
  double sum = 0.0;
  for (int m = 0; m < s.M; ++m) sum += a[m] * std::sin(s.k[m] * x);
  return sum;
}

double series_control_eval(const SeriesCoefficients& s, double x, double t) {
  std::vector<double> a, c;
  s.amplitudes(t, a, c);
  double sum = 0.0;
  for (int m = 0; m < s.M; ++m) sum += c[m] * std::sin(s.k[m] * x);
  return sum;
}

double kernel_eval(const Dispersion& d, double L, int M, double x, double xi) {
  if (M < 1) throw config_error("M", "must be >= 1");
  double sum = infinite_horizon_gain(d, 0.0).phat;
  for (int m = 1; m <= M; ++m) {
    const double k = kPi * m / L;
    sum += 2.0 * infinite_horizon_gain(d, k).phat * std::cos(k * (x - xi));
  }
  return sum;
}

KernelMatrix build_kernel_matrix(const Dispersion& d, double L, int M, const std::vector<double>& x,
                                 const std::vector<double>& xi) {
  if (M < 1) throw config_error("M", "must be >= 1");
  std::vector<double> k(M), ph(M);
  for (int m = 1; m <= M; ++m) {
    k[m - 1] = kPi * m / L;
    ph[m - 1] = infinite_horizon_gain(d, k[m - 1]).phat;
  }
  const double ph0 = infinite_horizon_gain(d, 0.0).phat;
  auto profile = [&](double delta) {
    double sum = ph0;
    for (int m = 0; m < M; ++m) sum += 2.0 * ph[m] * std::cos(k[m] * delta);
    return sum;
  };
  KernelMatrix km;
  km.x = x;
  km.xi = xi;
  const auto nx = static_cast<Eigen::Index>(x.size()), nxi = static_cast<Eigen::Index>(xi.size());
  km.toeplitz.resize(nx, nxi);
  km.hankel.resize(nx, nxi);
  for (Eigen::Index i = 0; i < nx; ++i) {
    for (Eigen::Index j = 0; j < nxi; ++j) {
      km.toeplitz(i, j) = profile(x[i] - xi[j]);
      km.hankel(i, j) = profile(x[i] + xi[j]);
    }
  }
  km.combined = (km.toeplitz - km.hankel) / (2.0 * L);
  return km;
}

KernelMatrix build_kernel_matrix(const Dispersion& d, double L, int M, int n) {
  if (n < 2) throw config_error("grid", "must be >= 2");
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = L * i / (n - 1);
  return build_kernel_matrix(d, L, M, x, x);
}

double feedback_control_eval(const SeriesCoefficients& s, const StateRow& row, double x, double t) {
  const double L = s.problem.L;
  const size_t n = row.xi.size();
  if (n != row.phi.size() || n < 2)
    throw Error(ErrorKind::InsufficientStateResolution, "state row needs matching xi and phi");
  if (std::abs(row.xi.front()) > 1e-12 * L || std::abs(row.xi.back() - L) > 1e-12 * L)
    throw Error(ErrorKind::InsufficientStateResolution, "state row must span [0, L]");
  if (static_cast<int>(n) - 1 < 2 * s.M)
    throw Error(ErrorKind::InsufficientStateResolution,
                "state row has " + std::to_string(n) + " nodes; need at least " +
                    std::to_string(2 * s.M + 1) + " for truncation M = " + std::to_string(s.M));
  double conv = 0.0;
  for (size_t j = 0; j < n; ++j) {
    const double left = j > 0 ? row.xi[j] - row.xi[j - 1] : 0.0;
    const double right = j + 1 < n ? row.xi[j + 1] - row.xi[j] : 0.0;
    const double w = 0.5 * (left + right);
    double kern = 0.0;  // Gamma(x,xi) - Gamma(x,-xi) = 4 sum phat sin sin
    for (int m = 0; m < s.M; ++m) kern += 4.0 * s.phat[m] * std::sin(s.k[m] * x) * std::sin(s.k[m] * row.xi[j]);
    conv += w * kern * row.phi[j];
  }
  double boundary = 0.0;
  if (!s.problem.bc.homogeneous()) {
    for (int m = 1; m <= s.M; ++m) boundary += std::sin(s.k[m - 1] * x) * s.boundary(m, t).b_ff.real();
  }
  return -conv / (2.0 * L) + boundary;
}

ToeplitzHankelParts toeplitz_hankel_decompose(const KernelMatrix& km) {
  if (km.toeplitz.rows() != km.toeplitz.cols())
    throw config_error("grid", "Toeplitz/Hankel decomposition needs a square grid");
  ToeplitzHankelParts out;
  out.toeplitz = km.toeplitz;
  out.hankel = km.hankel;
  const Eigen::Index n = km.toeplitz.rows();
  for (Eigen::Index off = -(n - 1); off <= n - 1; ++off) {
    double lo = 1e300, hi = -1e300;
    for (Eigen::Index i = std::max<Eigen::Index>(0, off); i < n && i - off < n; ++i) {
      const double v = km.toeplitz(i, i - off);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.max_diagonal_deviation = std::max(out.max_diagonal_deviation, hi - lo);
  }
  for (Eigen::Index sum = 0; sum <= 2 * (n - 1); ++sum) {
    double lo = 1e300, hi = -1e300;
    for (Eigen::Index i = std::max<Eigen::Index>(0, sum - (n - 1)); i <= std::min(sum, n - 1); ++i) {
      const double v = km.hankel(i, sum - i);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    out.max_antidiagonal_deviation = std::max(out.max_antidiagonal_deviation, hi - lo);
  }
  return out;
}

double toeplitz_lobe_width(const KernelMatrix& km) {
  const Eigen::Index n = km.toeplitz.rows();
  const double peak = km.toeplitz(0, 0);
  for (Eigen::Index i = 1; i < n; ++i) {
    const double v = km.toeplitz(i, 0);
    if (v <= 0.5 * peak) {
      const double prev = km.toeplitz(i - 1, 0);
      const double frac = (prev - 0.5 * peak) / (prev - v);
      return (km.x[i - 1] - km.xi[0]) + frac * (km.x[i] - km.x[i - 1]);
    }
  }
  return km.x.back() - km.xi.front();
}

double hankel_corner_mass_fraction(const KernelMatrix& km, double frac) {
  const double L = km.x.back();
  double corner = 0.0, total = 0.0;
  for (Eigen::Index i = 0; i < km.hankel.rows(); ++i) {
    for (Eigen::Index j = 0; j < km.hankel.cols(); ++j) {
      const double a = std::abs(km.hankel(i, j));
      total += a;
      const bool low = km.x[i] <= frac * L && km.xi[j] <= frac * L;
      const bool high = km.x[i] >= (1.0 - frac) * L && km.xi[j] >= (1.0 - frac) * L;
      if (low || high) corner += a;
    }
  }
  return total > 0.0 ? corner / total : 0.0;
}

}  // namespace uftlqr
