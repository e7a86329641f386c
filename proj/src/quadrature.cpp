#include "uftlqr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <string>
#include <vector>

#include "uftlqr/errors.hpp"

namespace uftlqr {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss points.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a, b;
  cd value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

}  // namespace

namespace detail {
const double kGkNodes[8] = {kXgk[0], kXgk[1], kXgk[2], kXgk[3], kXgk[4], kXgk[5], kXgk[6], kXgk[7]};
const double kGkWeights[8] = {kWgk[0], kWgk[1], kWgk[2], kWgk[3], kWgk[4], kWgk[5], kWgk[6], kWgk[7]};
const double kGWeights[4] = {kWg[0], kWg[1], kWg[2], kWg[3]};

void throw_quadrature_failure(double a, double b, double err, long evals) {
  throw Error(ErrorKind::QuadratureFailure,
              "adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                  "] stopped at error " + std::to_string(err) + " after " + std::to_string(evals) +
                  " evaluations");
}
}  // namespace detail

QuadResult gk15_panel(const std::function<cd(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const cd fc = f(c);
  cd rk = fc * kWgk[7];
  cd rg = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const cd f1 = f(c - dx);
    const cd f2 = f(c + dx);
    rk += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += kWg[j / 2] * (f1 + f2);
  }
  QuadResult r;
  r.value = rk * h;
  r.error = std::abs((rk - rg) * h);
  r.evals = 15;
  return r;
}

QuadResult integrate_gk(const std::function<cd(double)>& f, double a, double b,
                        const GkOptions& opt) {
  QuadResult out;
  if (a == b) return out;
  const int n0 = std::max(1, opt.initial_panels);
  std::priority_queue<Panel> heap;
  cd total = 0.0;
  double total_err = 0.0;
  long evals = 0;
  for (int i = 0; i < n0; ++i) {
    const double pa = a + (b - a) * i / n0;
    const double pb = (i + 1 == n0) ? b : a + (b - a) * (i + 1) / n0;
    QuadResult p = gk15_panel(f, pa, pb);
    evals += p.evals;
    total += p.value;
    total_err += p.error;
    heap.push({pa, pb, p.value, p.error});
  }
  const double min_width = 1e-14 * std::max(std::abs(a), std::abs(b)) + 1e-300;
  while (!heap.empty()) {
    const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
    if (total_err <= tol) break;
    if (evals + 30 > opt.max_evals) break;
    Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid - worst.a < min_width) break;
    heap.pop();
    QuadResult l = gk15_panel(f, worst.a, mid);
    QuadResult r = gk15_panel(f, mid, worst.b);
    evals += 30;
    total += l.value + r.value - worst.value;
    total_err += l.error + r.error - worst.error;
    heap.push({worst.a, mid, l.value, l.error});
    heap.push({mid, worst.b, r.value, r.error});
  }
  // Re-sum to shed the drift of incremental updates.
  total = 0.0;
  total_err = 0.0;
  while (!heap.empty()) {
    total += heap.top().value;
    total_err += heap.top().error;
    heap.pop();
  }
  out.value = total;
  out.error = total_err;
  out.evals = evals;
  const double tol = std::max(opt.abs_tol, opt.rel_tol * std::abs(total));
  out.converged = std::isfinite(total.real()) && std::isfinite(total.imag()) &&
                  total_err <= tol;
  if (!out.converged && opt.throw_on_failure) {
    throw Error(ErrorKind::QuadratureFailure,
                "adaptive quadrature on [" + std::to_string(a) + ", " + std::to_string(b) +
                    "] stopped at error " + std::to_string(total_err) + " after " +
                    std::to_string(evals) + " evaluations");
  }
  return out;
}

}  // namespace uftlqr
