#include "uftlqr/lqr.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unsupported/Eigen/MatrixFunctions>

#include "uftlqr/errors.hpp"
#include "uftlqr/quadrature.hpp"

namespace uftlqr {
namespace {

struct RiccatiState {
  Eigen::Matrix2d P;
  Matrix23d R;
};

RiccatiState axpy(const RiccatiState& x, double a, const RiccatiState& y) {
  return {x.P + a * y.P, x.R + a * y.R};
}

// Derivative with respect to s = T - t.
RiccatiState riccati_rhs(const RealizedSystem& sys, const RiccatiState& x, double t, bool freeze_p) {
  RiccatiState dx;
  const Eigen::Matrix2d BBt = sys.B * sys.B.transpose();
  if (freeze_p) {
    dx.P.setZero();
  } else {
    dx.P = Eigen::Matrix2d::Identity() - x.P * BBt * x.P + x.P * sys.A + sys.A.transpose() * x.P;
  }
  dx.R = x.P * sys.C + x.R * sys.D(t) + sys.A.transpose() * x.R - x.P * BBt * x.R;
  return dx;
}

std::vector<RiccatiState> integrate_backward(const RealizedSystem& sys, double T, int steps,
                                             const RiccatiState& terminal, bool freeze_p) {
  std::vector<RiccatiState> out(steps + 1);
  const double h = T / steps;
  RiccatiState x = terminal;
  out[steps] = x;
  for (int i = steps; i > 0; --i) {
    const double t = i * h;
    const RiccatiState k1 = riccati_rhs(sys, x, t, freeze_p);
    const RiccatiState k2 = riccati_rhs(sys, axpy(x, 0.5 * h, k1), t - 0.5 * h, freeze_p);
    const RiccatiState k3 = riccati_rhs(sys, axpy(x, 0.5 * h, k2), t - 0.5 * h, freeze_p);
    const RiccatiState k4 = riccati_rhs(sys, axpy(x, h, k3), t - h, freeze_p);
    x.P += h / 6.0 * (k1.P + 2.0 * k2.P + 2.0 * k3.P + k4.P);
    x.R += h / 6.0 * (k1.R + 2.0 * k2.R + 2.0 * k3.R + k4.R);
    x.P = 0.5 * (x.P + x.P.transpose());
    out[i - 1] = x;
  }
  return out;
}

}  // namespace

RealizedSystem realize(const Dispersion& d, double k, const FrequencyInput& v) {
  const cd w = w_eval(d, k);
  RealizedSystem sys;
  sys.A << -w.real(), w.imag(), -w.imag(), -w.real();
  sys.B = Eigen::Matrix2d::Identity();
  sys.C.setZero();
  sys.C(0, 0) = 1.0;
  sys.C(1, 1) = 1.0;
  sys.D = [v](double t) {
    Eigen::Matrix3d D = Eigen::Matrix3d::Zero();
    const cd dv = v.derivative(t);
    D(0, 2) = dv.real();
    D(1, 2) = dv.imag();
    return D;
  };
  return sys;
}

RiccatiSolution solve_riccati_finite(const Dispersion& d, double k, double T, const FrequencyInput& v,
                                     TerminalKind kind, int steps) {
  if (!(T > 0.0)) throw config_error("T", "horizon must be > 0");
  if (steps < 1) throw config_error("steps", "must be >= 1");
  const RealizedSystem sys = realize(d, k, v);
  const bool freeze = kind == TerminalKind::InfiniteHorizonZero;
  RiccatiState terminal;
  terminal.P = freeze ? Eigen::Matrix2d(infinite_horizon_gain(d, k).phat * Eigen::Matrix2d::Identity())
                      : Eigen::Matrix2d(Eigen::Matrix2d::Identity());
  terminal.R.setZero();

  const auto coarse = integrate_backward(sys, T, steps, terminal, freeze);
  const auto fine = integrate_backward(sys, T, 2 * steps, terminal, freeze);

  RiccatiSolution sol;
  sol.kind = kind;
  sol.t.resize(steps + 1);
  sol.P.resize(steps + 1);
  sol.R.resize(steps + 1);
  double err = 0.0;
  for (int i = 0; i <= steps; ++i) {
    sol.t[i] = T * i / steps;
    sol.P[i] = fine[2 * i].P;
    sol.R[i] = fine[2 * i].R;
    err = std::max(err, (fine[2 * i].P - coarse[i].P).cwiseAbs().maxCoeff());
    err = std::max(err, (fine[2 * i].R - coarse[i].R).cwiseAbs().maxCoeff());
  }
  sol.error_estimate = err / 15.0;
  if (!std::isfinite(sol.error_estimate) || sol.error_estimate > 1e-4) {
    throw Error(ErrorKind::StepSizeUnderflow,
                "Riccati integration unstable at k = " + std::to_string(k) +
                    " (Richardson estimate " + std::to_string(sol.error_estimate) + ")");
  }
  return sol;
}

FrequencyGain infinite_horizon_gain(const Dispersion& d, double k) {
  const cd w = w_eval(d, k);
  const double wr = w.real();
  const double root = std::sqrt(wr * wr + 1.0);
  FrequencyGain g;
  g.k = k;
  g.phat = wr >= 0.0 ? 1.0 / (root + wr) : root - wr;
  g.omega = cd(root, w.imag());
  g.omegabar = cd(root, -w.imag());
  return g;
}

Eigen::Matrix2d are_residual(const Dispersion& d, double k) {
  const RealizedSystem sys = realize(d, k, {});
  const Eigen::Matrix2d P = infinite_horizon_gain(d, k).phat * Eigen::Matrix2d::Identity();
  return Eigen::Matrix2d::Identity() - P * P + P * sys.A + sys.A.transpose() * P;
}

Eigen::Matrix2d rtilde_equilibrium(const Dispersion& d, double k) {
  const RealizedSystem sys = realize(d, k, {});
  const Eigen::Matrix2d P = infinite_horizon_gain(d, k).phat * Eigen::Matrix2d::Identity();
  return -(sys.A.transpose() - P).inverse() * P;
}

Eigen::Matrix2d rtilde_closed_form(const Dispersion& d, double k, double T, double t) {
  const RealizedSystem sys = realize(d, k, {});
  const Eigen::Matrix2d P = infinite_horizon_gain(d, k).phat * Eigen::Matrix2d::Identity();
  const Eigen::Matrix2d M = sys.A.transpose() - P;
  // -R~_t = P + M R~ with R~(T) = 0
  const Eigen::Matrix2d E = (M * (T - t)).exp();
  return (Eigen::Matrix2d::Identity() - E) * rtilde_equilibrium(d, k);
}

cd feedforward_integral(const FrequencyGain& g, const FrequencyInput& v, double t) {
  if (v.is_zero() || t >= v.vanish_time) return 0.0;
  double hi = v.vanish_time;
  if (g.omegabar.real() > 0.0) hi = std::min(hi, t + 46.0 / g.omegabar.real());
  GkOptions o;
  o.abs_tol = 1e-13;
  o.rel_tol = 1e-12;
  o.initial_panels = static_cast<int>(std::clamp(std::ceil(std::abs(g.omegabar) * (hi - t)), 1.0, 2048.0));
  auto f = [&](double tau) { return std::exp(g.omegabar * (t - tau)) * v(tau); };
  return integrate_gk(f, t, hi, o).value;
}

namespace {

std::vector<double> refine_grid(const std::vector<double>& knots, double max_step) {
  std::vector<double> out{knots.front()};
  for (size_t i = 1; i < knots.size(); ++i) {
    const double len = knots[i] - knots[i - 1];
    const int n = std::max(1, static_cast<int>(std::ceil(len / max_step)));
    for (int j = 1; j <= n; ++j) out.push_back(j == n ? knots[i] : knots[i - 1] + len * j / n);
  }
  return out;
}

// Closed-loop trajectory on a fine grid; returns values at the fine nodes.
std::vector<cd> closedloop_on(const FrequencyGain& g, cd phi0, const FrequencyInput& v,
                              const std::vector<double>& grid) {
  const size_t n = grid.size();
  std::vector<cd> F(n, 0.0);
  if (!v.is_zero()) {
    // F(t) = e^{-omegabar h} F(t + h) + int_t^{t+h} e^{omegabar (t - tau)} v(tau) d tau
    for (size_t i = n - 1; i-- > 0;) {
      const double a = grid[i], b = grid[i + 1];
      cd local = 0.0;
      if (a < v.vanish_time) {
        auto f = [&](double tau) { return std::exp(g.omegabar * (a - tau)) * v(tau); };
        local = gk15_panel(f, a, std::min(b, v.vanish_time)).value;
      }
      F[i] = std::exp(-g.omegabar * (b - a)) * F[i + 1] + local;
    }
  }
  std::vector<cd> phi(n);
  phi[0] = phi0;
  // v may jump at the vanish time, so the right end of a step takes the
  // limit from the left.
  auto v_left = [&](double t) { return (v.v && t <= v.vanish_time) ? v.v(t) : cd(0.0); };
  for (size_t i = 0; i + 1 < n; ++i) {
    const double h = grid[i + 1] - grid[i];
    const cd decay = std::exp(-g.omega * h);
    const cd f0 = v(grid[i]) - g.phat * F[i];
    const cd f1 = v_left(grid[i + 1]) - g.phat * F[i + 1];
    phi[i + 1] = decay * phi[i] + 0.5 * h * (decay * f0 + f1);
  }
  return phi;
}

}  // namespace

ClosedLoopTrajectory closedloop_solve(const FrequencyGain& g, cd phi0, const FrequencyInput& v,
                                      const std::vector<double>& t_grid, double max_step) {
  if (t_grid.empty()) return {};
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw config_error("t_grid", "must be non-negative and strictly increasing");
  }
  if (!(max_step > 0.0)) throw Error(ErrorKind::StepSizeUnderflow, "max_step must be > 0");
  std::vector<double> knots{0.0};
  for (double t : t_grid)
    if (t > 0.0) knots.push_back(t);
  // F has a kink at the vanish time; keep it on the grid.
  if (!v.is_zero() && std::isfinite(v.vanish_time) && v.vanish_time > 0.0) knots.push_back(v.vanish_time);
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end()), knots.end());

  const std::vector<double> coarse_grid = refine_grid(knots, max_step);
  const std::vector<double> fine_grid = refine_grid(knots, 0.5 * max_step);
  const std::vector<cd> coarse = closedloop_on(g, phi0, v, coarse_grid);
  const std::vector<cd> fine = closedloop_on(g, phi0, v, fine_grid);

  ClosedLoopTrajectory out;
  out.t = t_grid;
  out.phi.resize(t_grid.size());
  size_t ic = 0, jf = 0;
  for (size_t i = 0; i < t_grid.size(); ++i) {
    const double t = t_grid[i];
    while (coarse_grid[ic] != t) ++ic;
    while (fine_grid[jf] != t) ++jf;
    // Trapezoidal forcing is second order; one Richardson step.
    out.phi[i] = (4.0 * fine[jf] - coarse[ic]) / 3.0;
    out.error_estimate = std::max(out.error_estimate, std::abs(fine[jf] - coarse[ic]) / 3.0);
  }
  if (!std::isfinite(out.error_estimate))
    throw Error(ErrorKind::StepSizeUnderflow, "closed-loop integration produced non-finite values");
  return out;
}

cd control_from_state(const FrequencyGain& g, cd phi, const FrequencyInput& v, double t) {
  return -g.phat * phi - g.phat * feedforward_integral(g, v, t);
}

double frequency_cost(const Dispersion& d, double k, double gain, double T, int steps) {
  const cd w = w_eval(d, k);
  const cd rate = w + gain;
  const double h = T / steps;
  double total = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const cd phi = std::exp(-rate * (i * h));
    const double val = std::norm(phi) * (1.0 + gain * gain);
    total += (i == 0 || i == steps) ? 0.5 * val : val;
  }
  return total * h;
}

}  // namespace uftlqr
