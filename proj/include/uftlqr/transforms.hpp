#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "uftlqr/quadrature.hpp"
#include "uftlqr/spectral.hpp"

namespace uftlqr {

// Natural cubic spline through strictly increasing abscissae.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double t) const;
  double derivative(double t) const;
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

 private:
  size_t segment(double t) const;
  std::vector<double> x_, y_, m_;  // m_ holds second derivatives at the knots
};

// Initial condition phi_0 on [0, L].
class SpatialProfile {
 public:
  enum class Form { Sine, Polynomial, Tabulated };

  // amplitude * sin(mode * pi * x / L)
  static SpatialProfile sine(double L, double amplitude, double mode);
  // sum_j coeffs[j] x^j
  static SpatialProfile polynomial(double L, std::vector<double> coeffs);
  // natural cubic spline through (x_i, y_i); needs >= 8 nodes spanning [0, L]
  static SpatialProfile tabulated(double L, std::vector<double> x, std::vector<double> y);

  Form form() const { return form_; }
  double length() const { return L_; }
  double operator()(double x) const;
  // The profile x -> p(L - x).
  SpatialProfile reversed() const;

  // Descriptor parameters, kept for serialization.
  double amplitude() const { return amp_; }
  double mode() const { return mode_; }
  const std::vector<double>& poly_coeffs() const { return poly_; }
  const CubicSpline& spline() const { return spline_; }

 private:
  friend cd unified_transform(const SpatialProfile& p, cd kappa, const GkOptions& opt);
  Form form_ = Form::Sine;
  double L_ = 1.0;
  double amp_ = 0.0, mode_ = 1.0;
  // sine profiles are stored as amp_ * sin(mu_ x + phase_)
  double mu_ = 0.0, phase_ = 0.0;
  std::vector<double> poly_;
  CubicSpline spline_;
};

// int_0^L e^{-i kappa x} p(x) dx. Closed form for sine and polynomial
// profiles; adaptive quadrature per spline segment for tabulated ones.
// Accurate when e^{-i kappa x} is bounded on [0, L], i.e. Im kappa <= 0 or
// moderate |Im kappa| L.
cd unified_transform(const SpatialProfile& p, cd kappa, const GkOptions& opt = {});

// e^{i kappa L} * unified_transform(p, kappa), bounded for Im kappa >= 0.
cd reflected_transform(const SpatialProfile& p, cd kappa, const GkOptions& opt = {});

struct InverseResult {
  cd value;
  double error = 0.0;
  double tail = 0.0;
};

// (1/2pi) int_{-K}^{K} F(k) e^{ikx} dk with a tail estimate from [K, 2K].
InverseResult inverse_transform(const std::function<cd(double)>& F, double x, double K,
                                const GkOptions& opt = {});

// Dirichlet boundary datum in time, identically zero from vanish_time on.
class TimeSignal {
 public:
  enum class Form { Zero, Sine, Constant, Tabulated };

  static TimeSignal zero();
  // amplitude * sin(frequency t), multiplied by the taper
  static TimeSignal sine(double frequency, double amplitude, double vanish_time, double taper_width);
  static TimeSignal constant(double value, double vanish_time, double taper_width);
  static TimeSignal tabulated(std::vector<double> t, std::vector<double> v, double vanish_time,
                              double taper_width);

  Form form() const { return form_; }
  bool is_zero() const { return form_ == Form::Zero; }
  double vanish_time() const { return tbar_; }
  double taper_width() const { return taper_; }
  double frequency() const { return freq_; }
  double amplitude() const { return amp_; }
  const CubicSpline& spline() const { return spline_; }
  std::uint64_t id() const { return id_; }

  double base(double t) const;
  double taper(double t) const;
  double operator()(double t) const;
  double derivative(double t) const;

  // int_a^b e^{z (tau - anchor)} g(tau) d tau. Closed form on the untapered
  // part of sine/constant signals, adaptive quadrature elsewhere. Throws
  // OverflowGuard when the weight exceeds e^700 on [a, b].
  cd exp_moment(cd z, double a, double b, double anchor) const;

 private:
  void finalize();
  Form form_ = Form::Zero;
  double freq_ = 0.0, amp_ = 0.0;
  double tbar_ = std::numeric_limits<double>::infinity();
  double taper_ = 0.0;
  CubicSpline spline_;
  std::uint64_t id_ = 0;
};

struct BoundarySignal {
  TimeSignal g0 = TimeSignal::zero();  // phi(0, t)
  TimeSignal h0 = TimeSignal::zero();  // phi(L, t)
  bool homogeneous() const { return g0.is_zero() && h0.is_zero(); }
};

// C-infinity step: 0 at s <= 0, 1 at s >= 1.
double smooth_step(double s);

// int_0^t e^{kappa tau} s(tau) d tau
cd t_transform(const TimeSignal& s, cd kappa, double t);

// int_0^t e^{kappa tau} [int_tau^tbar e^{kbar (tau - r)} s(r) dr] d tau
cd future_weighted_transform(const TimeSignal& s, cd kappa, cd kbar, double t);

// s~(omega, t) - phat * s_(omega, omegabar, t) at the frequency kappa.
cd check_transform(const TimeSignal& s, const Dispersion& d, cd kappa, double t);

// Overflow-free pieces used by the contour and series evaluators.
// e^{-omega t} s~(omega, t) = int_0^t e^{-omega (t - tau)} s(tau) d tau
cd past_scaled(const TimeSignal& s, cd omega, double t);
// G(t) = int_t^tbar e^{omegabar (t - r)} s(r) dr
cd future_integral(const TimeSignal& s, cd omegabar, double t);
// e^{-omega t} s_(omega, omegabar, t)
cd underline_scaled(const TimeSignal& s, cd omega, cd omegabar, double t);

// Thread-safe memo of past_scaled / future_integral keyed on the exact bits
// of the frequency and time, so hits reproduce recomputation bit for bit.
class TransformCache {
 public:
  enum class Kind : std::uint8_t { Past = 1, Future = 2 };
  explicit TransformCache(size_t capacity = size_t(1) << 21) : capacity_(capacity) {}

  cd past_scaled(const TimeSignal& s, cd omega, double t);
  cd future_integral(const TimeSignal& s, cd omegabar, double t);

  size_t size() const;
  size_t hits() const;
  void clear();

 private:
  struct Key {
    std::uint64_t id, re, im, t;
    std::uint8_t kind;
    bool operator==(const Key& o) const {
      return id == o.id && re == o.re && im == o.im && t == o.t && kind == o.kind;
    }
  };
  struct KeyHash {
    size_t operator()(const Key& k) const;
  };
  cd lookup_or_compute(Kind kind, const TimeSignal& s, cd z, double t,
                       const std::function<cd()>& compute);

  size_t capacity_;
  size_t hits_ = 0;
  mutable std::mutex mu_;
  std::unordered_map<Key, cd, KeyHash> table_;
};

// v(kappa, t) = -sum_j c_j(kappa) [g_j - e^{-i kappa L} h_j] from the full
// boundary tuple (g_0..g_{n-1}, h_0..h_{n-1}) at one time.
cd v_eval(const Dispersion& d, double L, const std::vector<cd>& g, const std::vector<cd>& h,
          cd kappa);

}  // namespace uftlqr
