#include "uftlqr/transforms.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "uftlqr/errors.hpp"

namespace uftlqr {
namespace {

constexpr double kPi = std::numbers::pi;
const cd kI(0.0, 1.0);

std::atomic<std::uint64_t> g_next_signal_id{1};

// (e^u - 1) / u
cd phi1(cd u) {
  if (std::abs(u) < 0.5) {
    cd term = 1.0, sum = 1.0;
    for (int n = 1; n < 30; ++n) {
      term *= u / static_cast<double>(n + 1);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return (std::exp(u) - 1.0) / u;
}

// int_{s0}^{s1} e^{y sigma} d sigma, anchored at the endpoint with the larger
// exponent so that the remaining exponential is bounded by one.
cd exp_integral(cd y, double s0, double s1) {
  const double len = s1 - s0;
  if ((y * s1).real() >= (y * s0).real()) return std::exp(y * s1) * len * phi1(-y * len);
  return std::exp(y * s0) * len * phi1(y * len);
}

int panel_count(double scale, double len, int extra = 1) {
  const double n = std::ceil(scale * len / kPi) + extra;
  return static_cast<int>(std::clamp(n, 1.0, 4096.0));
}

}  // namespace

// ---------------------------------------------------------------------------
// CubicSpline

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) throw config_error("tabulated", "need matching abscissae and values");
  for (size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1])) throw config_error("tabulated", "abscissae must be strictly increasing");
  m_.assign(n, 0.0);
  if (n < 3) return;
  // Tridiagonal system for interior second derivatives, natural ends.
  std::vector<double> diag(n, 0.0), rhs(n, 0.0), upper(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1], h1 = x_[i + 1] - x_[i];
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (size_t i = 2; i + 1 < n; ++i) {
    const double lower = x_[i] - x_[i - 1];
    const double f = lower / diag[i - 1];
    diag[i] -= f * upper[i - 1];
    rhs[i] -= f * rhs[i - 1];
  }
  for (size_t i = n - 2; i >= 1; --i) {
    m_[i] = (rhs[i] - upper[i] * m_[i + 1]) / diag[i];
    if (i == 1) break;
  }
}

size_t CubicSpline::segment(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  size_t i = (it == x_.begin()) ? 0 : static_cast<size_t>(it - x_.begin()) - 1;
  return std::min(i, x_.size() - 2);
}

double CubicSpline::operator()(double t) const {
  if (x_.empty()) return 0.0;
  if (t <= x_.front()) return y_.front();
  if (t >= x_.back()) return y_.back();
  const size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double CubicSpline::derivative(double t) const {
  if (x_.empty() || t < x_.front() || t > x_.back()) return 0.0;
  const size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - t) / h, b = (t - x_[i]) / h;
  return (y_[i + 1] - y_[i]) / h +
         (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * b * b - 1.0) * m_[i + 1]) * h / 6.0;
}

// ---------------------------------------------------------------------------
// SpatialProfile

SpatialProfile SpatialProfile::sine(double L, double amplitude, double mode) {
  if (!(L > 0.0)) throw config_error("equation.L", "must be > 0");
  SpatialProfile p;
  p.form_ = Form::Sine;
  p.L_ = L;
  p.amp_ = amplitude;
  p.mode_ = mode;
  p.mu_ = mode * kPi / L;
  p.phase_ = 0.0;
  return p;
}

SpatialProfile SpatialProfile::polynomial(double L, std::vector<double> coeffs) {
  if (!(L > 0.0)) throw config_error("equation.L", "must be > 0");
  if (coeffs.empty()) throw config_error("initial.coefficients", "must be non-empty");
  SpatialProfile p;
  p.form_ = Form::Polynomial;
  p.L_ = L;
  p.poly_ = std::move(coeffs);
  return p;
}

SpatialProfile SpatialProfile::tabulated(double L, std::vector<double> x, std::vector<double> y) {
  if (!(L > 0.0)) throw config_error("equation.L", "must be > 0");
  if (x.size() < 8) throw config_error("initial.abscissae", "tabulated profiles need >= 8 nodes");
  if (std::abs(x.front()) > 1e-12 * L || std::abs(x.back() - L) > 1e-12 * L)
    throw config_error("initial.abscissae", "must span [0, L]");
  SpatialProfile p;
  p.form_ = Form::Tabulated;
  p.L_ = L;
  p.spline_ = CubicSpline(std::move(x), std::move(y));
  return p;
}

double SpatialProfile::operator()(double x) const {
  switch (form_) {
    case Form::Sine:
      return amp_ * std::sin(mu_ * x + phase_);
    case Form::Polynomial: {
      double acc = 0.0;
      for (auto it = poly_.rbegin(); it != poly_.rend(); ++it) acc = acc * x + *it;
      return acc;
    }
    case Form::Tabulated:
      return spline_(x);
  }
  return 0.0;
}

SpatialProfile SpatialProfile::reversed() const {
  SpatialProfile r = *this;
  switch (form_) {
    case Form::Sine:
      // A sin(mu (L - y) + ph) = -A sin(mu y - mu L - ph)
      r.amp_ = -amp_;
      r.phase_ = -(mu_ * L_ + phase_);
      break;
    case Form::Polynomial: {
      const size_t n = poly_.size();
      std::vector<double> out(n, 0.0);
      // sum_j a_j (L - y)^j expanded by the binomial theorem
      for (size_t j = 0; j < n; ++j) {
        double binom = 1.0;
        for (size_t m = 0; m <= j; ++m) {
          const double sign = (m % 2 == 0) ? 1.0 : -1.0;
          out[m] += poly_[j] * binom * std::pow(L_, static_cast<double>(j - m)) * sign;
          binom = binom * static_cast<double>(j - m) / static_cast<double>(m + 1);
        }
      }
      r.poly_ = std::move(out);
      break;
    }
    case Form::Tabulated: {
      const auto& x = spline_.x();
      const auto& y = spline_.y();
      std::vector<double> rx(x.size()), ry(y.size());
      for (size_t i = 0; i < x.size(); ++i) {
        rx[i] = L_ - x[x.size() - 1 - i];
        ry[i] = y[y.size() - 1 - i];
      }
      r.spline_ = CubicSpline(std::move(rx), std::move(ry));
      break;
    }
  }
  return r;
}

cd unified_transform(const SpatialProfile& p, cd kappa, const GkOptions& opt) {
  const double L = p.L_;
  switch (p.form_) {
    case SpatialProfile::Form::Sine: {
      const cd a = std::exp(kI * p.phase_) * phi1(kI * (p.mu_ - kappa) * L);
      const cd b = std::exp(-kI * p.phase_) * phi1(-kI * (p.mu_ + kappa) * L);
      return p.amp_ / (2.0 * kI) * L * (a - b);
    }
    case SpatialProfile::Form::Polynomial: {
      const auto& a = p.poly_;
      if (std::abs(kappa) * L < 2.0) {
        cd total = 0.0;
        for (size_t j = 0; j < a.size(); ++j) {
          if (a[j] == 0.0) continue;
          cd term = std::pow(L, static_cast<double>(j + 1));  // n = 0 moment scaled by (n+j+1)
          cd sum = term / static_cast<double>(j + 1);
          for (int n = 1; n < 80; ++n) {
            term *= -kI * kappa * L / static_cast<double>(n);
            const cd add = term / static_cast<double>(n + j + 1);
            sum += add;
            if (std::abs(add) < 1e-18 * std::abs(sum)) break;
          }
          total += a[j] * sum;
        }
        return total;
      }
      // Repeated integration by parts; exact for polynomials.
      std::vector<double> deriv = a;
      const cd eL = std::exp(-kI * kappa * L);
      cd total = 0.0;
      cd ik_pow = kI * kappa;
      while (!deriv.empty()) {
        double at0 = deriv[0], atL = 0.0;
        for (auto it = deriv.rbegin(); it != deriv.rend(); ++it) atL = atL * L + *it;
        total += (at0 - eL * atL) / ik_pow;
        ik_pow *= kI * kappa;
        std::vector<double> next;
        for (size_t j = 1; j < deriv.size(); ++j) next.push_back(deriv[j] * static_cast<double>(j));
        deriv = std::move(next);
      }
      return total;
    }
    case SpatialProfile::Form::Tabulated: {
      const auto& x = p.spline_.x();
      cd total = 0.0;
      for (size_t i = 0; i + 1 < x.size(); ++i) {
        GkOptions o = opt;
        o.initial_panels = panel_count(std::abs(kappa.real()), x[i + 1] - x[i]);
        o.abs_tol = opt.abs_tol / static_cast<double>(x.size());
        auto f = [&](double s) { return std::exp(-kI * kappa * s) * p.spline_(s); };
        total += integrate_gk(f, x[i], x[i + 1], o).value;
      }
      return total;
    }
  }
  return 0.0;
}

cd reflected_transform(const SpatialProfile& p, cd kappa, const GkOptions& opt) {
  if (p.form() == SpatialProfile::Form::Tabulated) {
    const auto& x = p.spline().x();
    const double L = p.length();
    cd total = 0.0;
    for (size_t i = 0; i + 1 < x.size(); ++i) {
      GkOptions o = opt;
      o.initial_panels = panel_count(std::abs(kappa.real()), x[i + 1] - x[i]);
      o.abs_tol = opt.abs_tol / static_cast<double>(x.size());
      auto f = [&](double s) { return std::exp(kI * kappa * (L - s)) * p.spline()(s); };
      total += integrate_gk(f, x[i], x[i + 1], o).value;
    }
    return total;
  }
  return unified_transform(p.reversed(), -kappa, opt);
}

InverseResult inverse_transform(const std::function<cd(double)>& F, double x, double K,
                                const GkOptions& opt) {
  auto f = [&](double k) { return F(k) * std::exp(kI * k * x) / (2.0 * kPi); };
  const double scale = std::max(std::abs(x), 1.0);
  GkOptions o = opt;
  o.initial_panels = std::max(opt.initial_panels,
                              static_cast<int>(std::min(20000.0, std::ceil(2.0 * K * scale / kPi))));
  QuadResult main = integrate_gk(f, -K, K, o);
  GkOptions t = o;
  t.initial_panels = std::max(1, o.initial_panels / 2);
  t.throw_on_failure = false;
  const cd right = integrate_gk(f, K, 2.0 * K, t).value;
  const cd left = integrate_gk(f, -2.0 * K, -K, t).value;
  return {main.value, main.error, std::abs(right) + std::abs(left)};
}

// ---------------------------------------------------------------------------
// TimeSignal

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

namespace {

double smooth_step_derivative(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  const double da = a / (s * s), db = b / ((1.0 - s) * (1.0 - s));
  return (da * b + a * db) / ((a + b) * (a + b));
}

}  // namespace

TimeSignal TimeSignal::zero() {
  TimeSignal s;
  s.form_ = Form::Zero;
  s.finalize();
  return s;
}

TimeSignal TimeSignal::sine(double frequency, double amplitude, double vanish_time,
                            double taper_width) {
  TimeSignal s;
  s.form_ = Form::Sine;
  s.freq_ = frequency;
  s.amp_ = amplitude;
  s.tbar_ = vanish_time;
  s.taper_ = taper_width;
  s.finalize();
  return s;
}

TimeSignal TimeSignal::constant(double value, double vanish_time, double taper_width) {
  TimeSignal s;
  s.form_ = Form::Constant;
  s.amp_ = value;
  s.tbar_ = vanish_time;
  s.taper_ = taper_width;
  s.finalize();
  return s;
}

TimeSignal TimeSignal::tabulated(std::vector<double> t, std::vector<double> v, double vanish_time,
                                 double taper_width) {
  TimeSignal s;
  s.form_ = Form::Tabulated;
  s.spline_ = CubicSpline(std::move(t), std::move(v));
  s.tbar_ = vanish_time;
  s.taper_ = taper_width;
  for (double y : s.spline_.y()) s.amp_ = std::max(s.amp_, std::abs(y));
  s.finalize();
  return s;
}

void TimeSignal::finalize() {
  if (form_ != Form::Zero) {
    if (!(tbar_ >= 0.0) || !std::isfinite(tbar_))
      throw config_error("boundary.vanish_time", "must be finite and >= 0");
    if (!(taper_ >= 0.0) || taper_ > tbar_)
      throw config_error("boundary.taper_width", "must lie in [0, vanish_time]");
    if (taper_ == 0.0 && std::abs(base(tbar_)) > 1e-12 * (1.0 + std::abs(amp_)))
      throw config_error("boundary.taper_width",
                         "must be > 0 when the signal does not vanish at vanish_time");
  }
  id_ = g_next_signal_id.fetch_add(1);
}

double TimeSignal::base(double t) const {
  switch (form_) {
    case Form::Zero: return 0.0;
    case Form::Sine: return amp_ * std::sin(freq_ * t);
    case Form::Constant: return amp_;
    case Form::Tabulated: return spline_(t);
  }
  return 0.0;
}

double TimeSignal::taper(double t) const {
  if (t >= tbar_) return 0.0;
  if (taper_ <= 0.0) return 1.0;
  return smooth_step((tbar_ - t) / taper_);
}

double TimeSignal::operator()(double t) const {
  if (form_ == Form::Zero || t >= tbar_) return 0.0;
  return base(t) * taper(t);
}

double TimeSignal::derivative(double t) const {
  if (form_ == Form::Zero || t >= tbar_) return 0.0;
  double db = 0.0;
  switch (form_) {
    case Form::Sine: db = amp_ * freq_ * std::cos(freq_ * t); break;
    case Form::Tabulated: db = spline_.derivative(t); break;
    default: break;
  }
  double dtaper = 0.0;
  if (taper_ > 0.0) dtaper = -smooth_step_derivative((tbar_ - t) / taper_) / taper_;
  return db * taper(t) + base(t) * dtaper;
}

cd TimeSignal::exp_moment(cd z, double a, double b, double anchor) const {
  if (form_ == Form::Zero) return 0.0;
  b = std::min(b, tbar_);
  if (!(b > a)) return 0.0;
  const double zr = z.real();
  const double emax = std::max(zr * (a - anchor), zr * (b - anchor));
  if (emax > 700.0) {
    throw Error(ErrorKind::OverflowGuard,
                "exponential weight e^" + std::to_string(emax) +
                    " overflows; use the e^{-omega t}-scaled transforms");
  }
  const double ts = tbar_ - taper_;
  const double scale = std::max(std::abs(amp_), 1e-300);

  auto quad = [&](double lo, double hi) -> cd {
    // Drop the part of the window whose weight is below e^{-46} of the peak.
    if (zr > 0.0) lo = std::max(lo, anchor + (emax - 46.0) / zr);
    if (zr < 0.0) hi = std::min(hi, anchor + (emax - 46.0) / zr);
    if (!(hi > lo)) return 0.0;
    GkOptions o;
    o.abs_tol = 1e-15 * std::exp(emax) * scale * std::max(1.0, hi - lo);
    o.rel_tol = 1e-13;
    o.initial_panels = panel_count(std::abs(z), hi - lo, 2);
    o.max_evals = 200000;
    auto f = [&](double tau) { return std::exp(z * (tau - anchor)) * (*this)(tau); };
    return integrate_gk(f, lo, hi, o).value;
  };

  cd total = 0.0;
  const double u0 = a, u1 = std::min(b, ts);
  if (u1 > u0) {
    if (form_ == Form::Sine) {
      const cd ep = std::exp(kI * freq_ * anchor);
      total += amp_ / (2.0 * kI) *
               (ep * exp_integral(z + kI * freq_, u0 - anchor, u1 - anchor) -
                std::conj(ep) * exp_integral(z - kI * freq_, u0 - anchor, u1 - anchor));
    } else if (form_ == Form::Constant) {
      total += amp_ * exp_integral(z, u0 - anchor, u1 - anchor);
    } else {
      total += quad(u0, u1);
    }
  }
  const double q0 = std::max(a, ts);
  if (b > q0) total += quad(q0, b);
  return total;
}

// ---------------------------------------------------------------------------
// Time transforms

cd t_transform(const TimeSignal& s, cd kappa, double t) {
  if (t < 0.0) throw config_error("t", "time must be >= 0");
  return s.exp_moment(kappa, 0.0, t, 0.0);
}

cd past_scaled(const TimeSignal& s, cd omega, double t) {
  if (t <= 0.0) return 0.0;
  return s.exp_moment(omega, 0.0, t, t);
}

cd future_integral(const TimeSignal& s, cd omegabar, double t) {
  return s.exp_moment(-omegabar, t, s.vanish_time(), t);
}

cd underline_scaled(const TimeSignal& s, cd omega, cd omegabar, double t) {
  if (s.is_zero() || t <= 0.0) return 0.0;
  const cd sum = omega + omegabar;
  if (std::abs(sum) * std::max(t, 1.0) > 1e-2) {
    return (future_integral(s, omegabar, t) - std::exp(-omega * t) * future_integral(s, omegabar, 0.0) +
            past_scaled(s, omega, t)) /
           sum;
  }
  GkOptions o;
  o.abs_tol = 1e-13;
  o.initial_panels = 4;
  auto f = [&](double tau) { return std::exp(omega * (tau - t)) * future_integral(s, omegabar, tau); };
  return integrate_gk(f, 0.0, t, o).value;
}

cd future_weighted_transform(const TimeSignal& s, cd kappa, cd kbar, double t) {
  if (t < 0.0) throw config_error("t", "time must be >= 0");
  if (s.is_zero() || t == 0.0) return 0.0;
  if (kappa.real() * t > 700.0) {
    throw Error(ErrorKind::OverflowGuard, "Re(kappa) t > 700; use underline_scaled");
  }
  const cd sum = kappa + kbar;
  if (std::abs(sum) * std::max(t, 1.0) > 1e-2) {
    return (std::exp(kappa * t) * future_integral(s, kbar, t) - future_integral(s, kbar, 0.0) +
            t_transform(s, kappa, t)) /
           sum;
  }
  GkOptions o;
  o.abs_tol = 1e-13;
  o.initial_panels = 4;
  auto f = [&](double tau) { return std::exp(kappa * tau) * future_integral(s, kbar, tau); };
  return integrate_gk(f, 0.0, t, o).value;
}

cd check_transform(const TimeSignal& s, const Dispersion& d, cd kappa, double t) {
  if (s.is_zero() || t == 0.0) return 0.0;
  const OmegaPhat op = omega_phat(d, kappa);
  const cd wbar = omegabar_eval(d, kappa);
  return t_transform(s, op.omega, t) - op.phat * future_weighted_transform(s, op.omega, wbar, t);
}

// ---------------------------------------------------------------------------
// TransformCache

size_t TransformCache::KeyHash::operator()(const Key& k) const {
  auto mix = [](std::uint64_t h, std::uint64_t v) {
    v += 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    v ^= v >> 30;
    v *= 0xbf58476d1ce4e5b9ULL;
    v ^= v >> 27;
    return h ^ v;
  };
  std::uint64_t h = k.kind;
  h = mix(h, k.id);
  h = mix(h, k.re);
  h = mix(h, k.im);
  h = mix(h, k.t);
  return static_cast<size_t>(h);
}

cd TransformCache::lookup_or_compute(Kind kind, const TimeSignal& s, cd z, double t,
                                     const std::function<cd()>& compute) {
  const Key key{s.id(), std::bit_cast<std::uint64_t>(z.real()), std::bit_cast<std::uint64_t>(z.imag()),
                std::bit_cast<std::uint64_t>(t), static_cast<std::uint8_t>(kind)};
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) {
      ++hits_;
      return it->second;
    }
  }
  const cd value = compute();
  std::lock_guard<std::mutex> lock(mu_);
  if (table_.size() >= capacity_) table_.clear();
  table_.emplace(key, value);
  return value;
}

cd TransformCache::past_scaled(const TimeSignal& s, cd omega, double t) {
  return lookup_or_compute(Kind::Past, s, omega, t, [&] { return uftlqr::past_scaled(s, omega, t); });
}

cd TransformCache::future_integral(const TimeSignal& s, cd omegabar, double t) {
  return lookup_or_compute(Kind::Future, s, omegabar, t,
                           [&] { return uftlqr::future_integral(s, omegabar, t); });
}

size_t TransformCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return table_.size();
}

size_t TransformCache::hits() const {
  std::lock_guard<std::mutex> lock(mu_);
  return hits_;
}

void TransformCache::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  table_.clear();
  hits_ = 0;
}

cd v_eval(const Dispersion& d, double L, const std::vector<cd>& g, const std::vector<cd>& h,
          cd kappa) {
  const auto c = c_coeffs(d);
  const cd eL = std::exp(-kI * kappa * L);
  cd v = 0.0;
  for (size_t j = 0; j < c.size(); ++j) {
    const cd gj = j < g.size() ? g[j] : 0.0;
    const cd hj = j < h.size() ? h[j] : 0.0;
    v -= c[j](kappa) * (gj - eL * hj);
  }
  return v;
}

}  // namespace uftlqr
