#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <queue>
#include <string>

namespace uftlqr {

using cd = std::complex<double>;

struct GkOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  long max_evals = 100000;
  // Uniform panels the interval is split into before adaptive refinement.
  int initial_panels = 1;
  // When false an unconverged result is returned with converged = false.
  bool throw_on_failure = true;
};

struct QuadResult {
  cd value{0.0, 0.0};
  double error = 0.0;
  long evals = 0;
  bool converged = true;
};

// Adaptive Gauss-Kronrod (7/15) quadrature of a complex integrand on [a, b].
// Panels with the largest error estimate are bisected first.
QuadResult integrate_gk(const std::function<cd(double)>& f, double a, double b,
                        const GkOptions& opt = {});

// Single G7K15 panel, no refinement.
QuadResult gk15_panel(const std::function<cd(double)>& f, double a, double b);

// Vector-valued variant: all components share panels, and the error is the
// sum of the component errors.
template <std::size_t N>
struct QuadResultN {
  std::array<cd, N> value{};
  double error = 0.0;
  long evals = 0;
  bool converged = true;
};

namespace detail {
extern const double kGkNodes[8];
extern const double kGkWeights[8];
extern const double kGWeights[4];
[[noreturn]] void throw_quadrature_failure(double a, double b, double err, long evals);
}  // namespace detail

template <std::size_t N, class F>
QuadResultN<N> integrate_gk_n(const F& f, double a, double b, const GkOptions& opt = {}) {
  using Vec = std::array<cd, N>;
  struct Panel {
    double a, b;
    Vec value;
    double error;
    bool operator<(const Panel& o) const { return error < o.error; }
  };
  auto panel = [&](double pa, double pb) {
    const double c = 0.5 * (pa + pb), h = 0.5 * (pb - pa);
    const Vec fc = f(c);
    Vec rk, rg;
    for (std::size_t i = 0; i < N; ++i) {
      rk[i] = fc[i] * detail::kGkWeights[7];
      rg[i] = fc[i] * detail::kGWeights[3];
    }
    for (int j = 0; j < 7; ++j) {
      const double dx = h * detail::kGkNodes[j];
      const Vec f1 = f(c - dx), f2 = f(c + dx);
      for (std::size_t i = 0; i < N; ++i) {
        rk[i] += detail::kGkWeights[j] * (f1[i] + f2[i]);
        if (j % 2 == 1) rg[i] += detail::kGWeights[j / 2] * (f1[i] + f2[i]);
      }
    }
    Panel p{pa, pb, {}, 0.0};
    for (std::size_t i = 0; i < N; ++i) {
      p.value[i] = rk[i] * h;
      p.error += std::abs((rk[i] - rg[i]) * h);
    }
    return p;
  };
  QuadResultN<N> out;
  if (a == b) return out;
  const int n0 = std::max(1, opt.initial_panels);
  std::priority_queue<Panel> heap;
  double total_err = 0.0, total_mag = 0.0;
  long evals = 0;
  Vec total{};
  for (int i = 0; i < n0; ++i) {
    const double pa = a + (b - a) * i / n0;
    const double pb = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
    Panel p = panel(pa, pb);
    evals += 15;
    total_err += p.error;
    for (std::size_t k = 0; k < N; ++k) total[k] += p.value[k];
    heap.push(p);
  }
  auto magnitude = [&] {
    double m = 0.0;
    for (std::size_t k = 0; k < N; ++k) m += std::abs(total[k]);
    return m;
  };
  total_mag = magnitude();
  const double min_width = 1e-14 * std::max(std::abs(a), std::abs(b)) + 1e-300;
  while (!heap.empty()) {
    if (total_err <= std::max(opt.abs_tol, opt.rel_tol * total_mag)) break;
    if (evals + 30 > opt.max_evals) break;
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid - worst.a < min_width) break;
    heap.pop();
    Panel l = panel(worst.a, mid), r = panel(mid, worst.b);
    evals += 30;
    total_err += l.error + r.error - worst.error;
    for (std::size_t k = 0; k < N; ++k) total[k] += l.value[k] + r.value[k] - worst.value[k];
    total_mag = magnitude();
    heap.push(l);
    heap.push(r);
  }
  total = Vec{};
  total_err = 0.0;
  while (!heap.empty()) {
    for (std::size_t k = 0; k < N; ++k) total[k] += heap.top().value[k];
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  out.evals = evals;
  bool finite = std::isfinite(total_err);
  for (std::size_t k = 0; k < N; ++k)
    finite = finite && std::isfinite(total[k].real()) && std::isfinite(total[k].imag());
  out.converged = finite && total_err <= std::max(opt.abs_tol, opt.rel_tol * magnitude());
  if (!out.converged && opt.throw_on_failure) detail::throw_quadrature_failure(a, b, total_err, evals);
  return out;
}

// Contour quadrature controls shared by the contour builder and evaluators.
struct QuadratureSpec {
  double epsilon_origin = 1e-4;
  // <= 0 selects the automatic radius from the integrand's dominant decay.
  double truncation_radius = 0.0;
  double panel_tolerance = 1e-10;
  long max_evals = 100000;
  double t_min = 1e-3;
  bool use_cache = true;
};

}  // namespace uftlqr
