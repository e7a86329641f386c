#include "uftlqr/contour.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "uftlqr/errors.hpp"
#include "uftlqr/parallel.hpp"
#include "uftlqr/series.hpp"

namespace uftlqr {
namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

bool same_signal(const TimeSignal& a, const TimeSignal& b) {
  if (a.form() != b.form()) return false;
  if (a.frequency() != b.frequency() || a.amplitude() != b.amplitude() || a.vanish_time() != b.vanish_time() ||
      a.taper_width() != b.taper_width())
    return false;
  if (a.form() == TimeSignal::Form::Tabulated)
    return a.spline().x() == b.spline().x() && a.spline().y() == b.spline().y();
  return true;
}

// e^{-omega t}-scaled check transform and the future integral G(t).
struct SignalParts {
  cd check;
  cd future;
};

SignalParts signal_parts(const TimeSignal& s, cd omega, cd omegabar, cd phat, double t) {
  if (s.is_zero()) return {};
  const cd past = past_scaled(s, omega, t);
  const cd future = future_integral(s, omegabar, t);
  cd under;
  const cd sum = omega + omegabar;
  if (std::abs(sum) * std::max(t, 1.0) > 1e-2) {
    under = (future - std::exp(-omega * t) * future_integral(s, omegabar, 0.0) + past) / sum;
  } else {
    under = underline_scaled(s, omega, omegabar, t);
  }
  return {past - phat * under, future};
}

struct Pieces {
  cd init;    // e^{-omega t} U1 / Delta, initial-data part
  cd bdry;    // e^{-omega t} U1 / Delta, boundary part
  cd u2;      // U2 / Delta
  cd omega;
  cd phat;
};

Pieces pieces(const Problem& p, cd kappa, double x, double t, bool same_gh) {
  const OmegaPhat op = omega_phat(p.d, kappa);
  const double L = p.L;
  const cd rx = sine_ratio(kappa, x, L);
  const cd rlx = sine_ratio(kappa, L - x, L);
  Pieces out;
  out.omega = op.omega;
  out.phat = op.phat;
  const cd decay = std::exp(-op.omega * t);
  if (decay != 0.0)
    out.init = decay * (rx * reflected_transform(p.phi0, kappa) + rlx * unified_transform(p.phi0, -kappa));
  if (!p.bc.homogeneous()) {
    const cd omegabar = omegabar_eval(p.d, kappa);
    const SignalParts g = signal_parts(p.bc.g0, op.omega, omegabar, op.phat, t);
    const SignalParts h = same_gh ? g : signal_parts(p.bc.h0, op.omega, omegabar, op.phat, t);
    const cd two_ik = 2.0 * kI * kappa;
    out.bdry = two_ik * (rx * h.check + rlx * g.check);
    out.u2 = two_ik * (rx * (p.bc.h0(t) - op.phat * h.future) + rlx * (p.bc.g0(t) - op.phat * g.future));
  }
  return out;
}

double bisect_radius(const std::function<double(double)>& level, double target) {
  double R = 1.0;
  while (level(R) < target && R < 1e8) R *= 2.0;
  double lo = R / 2.0, hi = R;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (level(mid) < target ? lo : hi) = mid;
  }
  return hi;
}

// int_a^b |f| by 16-point-per-panel trapezoid sums on fixed panels.
template <std::size_t N, class F>
double abs_mass(const F& f, double a, double b, int panels) {
  const int n = panels * 16;
  const double h = (b - a) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const auto v = f(a + h * i);
    double m = 0.0;
    for (std::size_t k = 0; k < N; ++k) m += std::abs(v[k]);
    sum += (i == 0 || i == n) ? 0.5 * m : m;
  }
  return sum * h;
}

int oscillation_panels(double R, double x, double L) {
  return static_cast<int>(std::ceil(R * std::max(x, L - x) / (2.0 * kPi))) + 4;
}

void check_point(const Problem& p, double x, double t, double t_min) {
  if (!(x > 0.0 && x < p.L)) throw config_error("grid.x", "contour evaluation needs 0 < x < L");
  if (!(t >= t_min)) throw config_error("grid.t", "contour evaluation needs t >= quadrature.t_min");
}

// Integrates a vector integrand over the upper contour: left ray inward,
// the chord joining the rays at radius eps, right ray outward.
template <std::size_t N, class F>
QuadResultN<N> contour_integral(const F& f, double theta, double eps, double R, const GkOptions& opt) {
  const cd dir_r = std::polar(1.0, theta), dir_l = std::polar(1.0, kPi - theta);
  auto ray = [&](cd dir) {
    return integrate_gk_n<N>(
        [&](double r) {
          auto v = f(r * dir);
          for (auto& c : v) c *= dir;
          return v;
        },
        eps, R, opt);
  };
  const auto right = ray(dir_r), left = ray(dir_l);
  const cd a = eps * dir_l, b = eps * dir_r;
  GkOptions copt = opt;
  copt.initial_panels = 2;
  const auto chord = integrate_gk_n<N>(
      [&](double s) {
        auto v = f(a + s * (b - a));
        for (auto& c : v) c *= (b - a);
        return v;
      },
      0.0, 1.0, copt);
  QuadResultN<N> out;
  for (std::size_t k = 0; k < N; ++k) out.value[k] = right.value[k] - left.value[k] + chord.value[k];
  out.error = right.error + left.error + chord.error;
  out.evals = right.evals + left.evals + chord.evals;
  out.converged = right.converged && left.converged && chord.converged;
  return out;
}

}  // namespace

ContourIntegrands contour_integrands(const Problem& p, cd kappa, double x, double t) {
  const Pieces pc = pieces(p, kappa, x, t, same_signal(p.bc.g0, p.bc.h0));
  ContourIntegrands out;
  out.omega = pc.omega;
  out.phat = pc.phat;
  out.scaled1 = pc.init + pc.bdry;
  out.over_delta2 = pc.u2;
  const cd delta = delta_eval(kappa, p.L);
  out.U1 = delta * std::exp(pc.omega * t) * out.scaled1;
  out.U2 = delta * out.over_delta2;
  return out;
}

ContourEvaluator::ContourEvaluator(Problem p, QuadratureSpec quad, std::optional<double> angle_override)
    : p_(std::move(p)), quad_(quad) {
  if (angle_override) {
    theta_ = *angle_override;
  } else {
    theta_ = build_contour(p_.d, quad_).rays.back().angle;
  }
}

double ContourEvaluator::initial_radius(double t) const {
  const Dispersion& d = p_.d;
  const double th = theta_;
  return bisect_radius([&](double R) { return omega_eval(d, std::polar(R, th)).real() * t; }, 40.0);
}

double ContourEvaluator::boundary_radius(double x) const {
  return 40.0 / (std::abs(std::sin(theta_)) * std::min(x, p_.L - x));
}

ContourPoint ContourEvaluator::eval(double x, double t) const {
  check_point(p_, x, t, quad_.t_min);
  const double L = p_.L;
  const bool same_gh = same_signal(p_.bc.g0, p_.bc.h0);
  ContourPoint out;

  // Real line: int e^{ikx - omega t} phi0^(k) [1, phat] dk / 2pi.
  const double c = p_.d.reaction_c.value_or(0.0);
  double Rk = quad_.truncation_radius;
  if (Rk <= 0.0) {
    const double target = 40.0 / t;
    Rk = std::sqrt(std::max(std::sqrt(std::max(target * target - 1.0, 0.0)) - c, 1.0));
  }
  auto line = [&](double k) {
    const OmegaPhat op = omega_phat(p_.d, cd(k));
    const cd v = std::exp(kI * k * x - op.omega * t) * unified_transform(p_.phi0, cd(k));
    return std::array<cd, 2>{v, op.phat * v};
  };
  GkOptions lo;
  lo.abs_tol = quad_.panel_tolerance;
  lo.initial_panels = 2 * oscillation_panels(Rk, x, L);
  lo.max_evals = std::max<long>(quad_.max_evals, 600L * lo.initial_panels);
  const auto real_line = integrate_gk_n<2>(line, -Rk, Rk, lo);
  const double line_tail = abs_mass<2>(line, Rk, 2.0 * Rk, 16) + abs_mass<2>(line, -2.0 * Rk, -Rk, 16);

  // Upper contour: [S, phat S, U2 / Delta].
  double R = quad_.truncation_radius;
  if (R <= 0.0) {
    R = initial_radius(t);
    if (!p_.bc.homogeneous()) R = std::max(R, boundary_radius(x));
  }
  auto integrand = [&](cd kappa) {
    const Pieces pc = pieces(p_, kappa, x, t, same_gh);
    const cd s = pc.init + pc.bdry;
    return std::array<cd, 3>{s, pc.phat * s, pc.u2};
  };
  GkOptions ro;
  ro.abs_tol = quad_.panel_tolerance;
  ro.initial_panels = oscillation_panels(R, x, L);
  ro.max_evals = std::max<long>(quad_.max_evals, 600L * ro.initial_panels);
  const auto cont = contour_integral<3>(integrand, theta_, quad_.epsilon_origin, R, ro);
  const cd dir_r = std::polar(1.0, theta_), dir_l = std::polar(1.0, kPi - theta_);
  const double ray_tail =
      abs_mass<3>([&](double r) { return integrand(r * dir_r); }, R, 2.0 * R, 16) +
      abs_mass<3>([&](double r) { return integrand(r * dir_l); }, R, 2.0 * R, 16);

  const double inv2pi = 1.0 / (2.0 * kPi);
  const cd line_state = real_line.value[0] * inv2pi, line_control = -real_line.value[1] * inv2pi;
  const cd u1_term = cont.value[1] * inv2pi, u2_term = -cont.value[2] * inv2pi;
  out.state = line_state - cont.value[0] * inv2pi;
  out.control = line_control + u1_term + u2_term;
  const double err = (real_line.error + line_tail + cont.error + ray_tail) * inv2pi;
  out.state_err = err;
  out.control_err = err;
  out.term_magnitude[0] = std::abs(line_control);
  out.term_magnitude[1] = std::abs(u1_term);
  out.term_magnitude[2] = std::abs(u2_term);
  out.evals = real_line.evals + cont.evals;
  return out;
}

PointValue control_integral_eval(const Problem& p, double x, double t, const QuadratureSpec& quad) {
  const ContourPoint pt = ContourEvaluator(p, quad).eval(x, t);
  return {pt.control, pt.control_err};
}

PointValue state_integral_eval(const Problem& p, double x, double t, const QuadratureSpec& quad) {
  const ContourPoint pt = ContourEvaluator(p, quad).eval(x, t);
  return {pt.state, pt.state_err};
}

ContourFields contour_fields(const Problem& p, const std::vector<double>& x, const std::vector<double>& t,
                             const QuadratureSpec& quad) {
  const ContourEvaluator ev(p, quad);
  ContourFields out{Field(x, t, Method::Contour), Field(x, t, Method::Contour)};
  const size_t nx = x.size();
  parallel_for(nx * t.size(), [&](size_t i) {
    const size_t it = i / nx, ix = i % nx;
    const ContourPoint pt = ev.eval(x[ix], t[it]);
    out.control.at(it, ix) = pt.control;
    out.control.err_at(it, ix) = pt.control_err;
    out.state.at(it, ix) = pt.state;
    out.state.err_at(it, ix) = pt.state_err;
  });
  return out;
}

VanishingResult vanishing_term_check(const Problem& p, double x, double t, double radius, int M,
                                     std::optional<double> angle_override) {
  if (!(x > 0.0 && x < p.L)) throw config_error("x", "needs 0 < x < L");
  const double L = p.L;
  const double theta = angle_override ? *angle_override : contour_angle(p.d.reaction_c.value_or(0.0));
  VanishingResult out;
  out.radius = radius > 0.0 ? radius : 20.0 / (std::abs(std::sin(theta)) * std::min(x, L - x));

  const SeriesCoefficients s = make_series(p, M);
  std::vector<double> amp, ctrl;
  s.amplitudes(t, amp, ctrl);
  std::vector<SpatialProfile> modes;
  for (int m = 1; m <= M; ++m) modes.push_back(SpatialProfile::sine(L, 1.0, m));

  auto integrand = [&](cd kappa) {
    cd eplus = 0.0, pminus = 0.0;
    for (int m = 0; m < M; ++m) {
      if (amp[m] == 0.0) continue;
      eplus += amp[m] * reflected_transform(modes[m], kappa);
      pminus += amp[m] * unified_transform(modes[m], -kappa);
    }
    const cd denom = std::exp(2.0 * kI * kappa * L) - 1.0;
    auto D = [&](double a) { return std::exp(kI * kappa * a) / denom; };
    const cd gterm = -D(x + L) * eplus + D(x) * pminus;
    const cd hterm = -D(L - x) * eplus + D(2.0 * L - x) * pminus;
    return std::array<cd, 1>{w_eval(p.d, kappa) * (gterm - hterm)};
  };
  GkOptions o;
  o.abs_tol = 1e-13;
  o.throw_on_failure = false;
  o.initial_panels = oscillation_panels(out.radius, x, L);
  o.max_evals = std::max<long>(200000, 600L * o.initial_panels);
  const auto r = contour_integral<1>(integrand, theta, 1e-4, out.radius, o);
  out.residual = std::abs(r.value[0]) / (2.0 * kPi);
  out.error = r.error / (2.0 * kPi);
  out.converged = r.converged;
  return out;
}

cd u3_bandlimited_check(const Dispersion& d, double L, const std::vector<cd>& g, const std::vector<cd>& h,
                        double x, double K) {
  if (!(K > 0.0)) throw config_error("K", "must be > 0");
  auto window = [](double s) {
    const double a = std::abs(s);
    return a <= 0.5 ? 1.0 : smooth_step((1.0 - a) / 0.5);
  };
  auto f = [&](double k) { return std::exp(kI * k * x) * v_eval(d, L, g, h, cd(k)) * window(k / K); };
  GkOptions o;
  o.abs_tol = 1e-12;
  o.rel_tol = 1e-12;
  o.initial_panels = static_cast<int>(std::ceil(K * std::max(x, L) / kPi)) + 4;
  o.max_evals = std::max<long>(200000, 600L * o.initial_panels);
  return integrate_gk(f, -K, K, o).value / (2.0 * kPi);
}

JordanProbe jordan_probe(const Problem& p, double x, double t, double R0) {
  const double theta = contour_angle(p.d.reaction_c.value_or(0.0));
  JordanProbe out;
  out.R0 = R0;
  const int n = 257;
  for (int j = 0; j < 3; ++j) {
    const double R = R0 * std::ldexp(1.0, j);
    double mx = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = theta / 64.0 + (theta - theta / 64.0) * i / (n - 1);
      for (double arg : {a, kPi - a}) {
        const Pieces pc = pieces(p, std::polar(R, arg), x, t, true);
        mx = std::max(mx, std::abs(pc.init));
      }
    }
    out.max_abs[j] = mx;
  }
  out.decays = out.max_abs[1] <= 0.5 * out.max_abs[0] && out.max_abs[2] <= 0.5 * out.max_abs[1];
  return out;
}

}  // namespace uftlqr
