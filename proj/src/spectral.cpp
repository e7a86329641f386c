#include "uftlqr/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "uftlqr/errors.hpp"

namespace uftlqr {
namespace {

constexpr double kPi = std::numbers::pi;

cd horner(const std::vector<cd>& a, cd z) {
  cd acc = 0.0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::vector<cd> real_parts(const std::vector<cd>& a) {
  std::vector<cd> out(a.size());
  for (size_t j = 0; j < a.size(); ++j) out[j] = a[j].real();
  return out;
}

std::vector<cd> imag_parts(const std::vector<cd>& a) {
  std::vector<cd> out(a.size());
  for (size_t j = 0; j < a.size(); ++j) out[j] = a[j].imag();
  return out;
}

std::vector<cd> poly_mul(const std::vector<cd>& a, const std::vector<cd>& b) {
  std::vector<cd> out(a.size() + b.size() - 1, 0.0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
  return out;
}

// Durand-Kerner iteration for all roots of a polynomial.
std::vector<cd> poly_roots(std::vector<cd> a) {
  while (a.size() > 1 && std::abs(a.back()) == 0.0) a.pop_back();
  const int n = static_cast<int>(a.size()) - 1;
  std::vector<cd> roots;
  if (n < 1) return roots;
  const cd lead = a.back();
  for (auto& c : a) c /= lead;
  double radius = 0.0;
  for (int j = 0; j < n; ++j) radius = std::max(radius, std::abs(a[j]));
  radius = 1.0 + radius;
  roots.resize(n);
  const cd seed(0.4, 0.9);
  for (int j = 0; j < n; ++j) roots[j] = radius * std::pow(seed, j);
  for (int iter = 0; iter < 500; ++iter) {
    double change = 0.0;
    for (int j = 0; j < n; ++j) {
      cd denom = 1.0;
      for (int m = 0; m < n; ++m)
        if (m != j) denom *= roots[j] - roots[m];
      const cd step = horner(a, roots[j]) / denom;
      roots[j] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15 * radius) break;
  }
  return roots;
}

double ray_distance(cd kappa, cd origin, double angle) {
  const cd u = std::polar(1.0, angle);
  const cd rel = (kappa - origin) * std::conj(u);
  if (rel.real() < 0.0) return std::abs(kappa - origin);
  return std::abs(rel.imag());
}

bool is_reaction_diffusion(const Dispersion& d) { return d.reaction_c.has_value(); }

void check_cut(const Dispersion& d, cd kappa) {
  const double tol = 1e-10 * std::max(1.0, std::abs(kappa));
  double dist;
  if (d.reaction_c) {
    const double radius = d.rd_branch_radius;
    const double half = d.rd_branch_angle;
    dist = std::numeric_limits<double>::infinity();
    for (double th : {half, -half, kPi - half, kPi + half})
      dist = std::min(dist, ray_distance(kappa, std::polar(radius, th), th));
  } else {
    dist = branch_cuts(d).distance(kappa);
  }
  if (dist <= tol) {
    throw Error(ErrorKind::BranchCutViolation,
                "kappa = (" + std::to_string(kappa.real()) + ", " +
                    std::to_string(kappa.imag()) + ") lies on a branch cut of omega");
  }
}

// sqrt(w_Re^2 + 1) continued radially from the origin.
cd radial_root(const Dispersion& d, cd kappa) {
  if (is_reaction_diffusion(d)) {
    const double c = *d.reaction_c;
    const cd k2 = kappa * kappa;
    const cd w = k2 + c;
    cd s = std::sqrt(w * w + 1.0);
    // The principal root jumps where (s^2 k2 + c)^2 + 1 crosses the negative
    // axis, i.e. s^2 k2 + c = i y with |y| >= 1. Along the radial path this can
    // happen once, at |s^2 k2| = -c / cos(arg k2).
    const double rho = std::abs(k2);
    const double phi = std::arg(k2);
    const double cphi = std::cos(phi);
    if (c > 0.0 && cphi < 0.0) {
      const double rs = -c / cphi;
      if (rs < rho && std::abs(rs * std::sin(phi)) >= 1.0) s = -s;
    }
    return s;
  }
  const std::vector<cd> wr = real_parts(d.coeffs);
  auto q = [&](cd z) {
    const cd v = horner(wr, z);
    return v * v + 1.0;
  };
  cd prev = std::sqrt(q(0.0));
  const int steps = 64 * std::max(1, d.order);
  for (int i = 1; i <= steps; ++i) {
    const cd r = std::sqrt(q(kappa * (static_cast<double>(i) / steps)));
    prev = (std::abs(r - prev) <= std::abs(-r - prev)) ? r : -r;
  }
  return prev;
}

}  // namespace

cd Polynomial::operator()(cd z) const { return horner(coeffs, z); }

Dispersion Dispersion::from_coeffs(std::vector<cd> coeffs) {
  while (coeffs.size() > 1 && std::abs(coeffs.back()) == 0.0) coeffs.pop_back();
  if (coeffs.empty() || std::abs(coeffs.back()) == 0.0 || coeffs.size() < 2) {
    throw config_error("equation.coeffs", "leading coefficient alpha_n must be non-zero, n >= 1");
  }
  Dispersion d;
  d.coeffs = std::move(coeffs);
  d.order = static_cast<int>(d.coeffs.size()) - 1;
  const int samples = 1001;
  const double K = 100.0;
  for (int i = 0; i < samples; ++i) {
    const double k = -K + 2.0 * K * i / (samples - 1);
    const cd w = horner(d.coeffs, k);
    if (w.real() < -1e-10 * (1.0 + std::abs(w))) {
      throw config_error("equation", "dispersion violates Re w(k) >= 0 at k = " + std::to_string(k));
    }
  }
  for (const cd& a : d.coeffs)
    if (a.imag() != 0.0) d.deformation_unsupported = true;
  return d;
}

Dispersion Dispersion::reaction_diffusion(double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw config_error("equation.c", "must be a finite value >= 0");
  Dispersion d = from_coeffs({cd(c), cd(0.0), cd(1.0)});
  d.reaction_c = c;
  d.rd_branch_radius = std::pow(c * c + 1.0, 0.25);
  d.rd_branch_angle = 0.5 * std::atan(1.0 / c);
  return d;
}

cd Dispersion::w_re(cd kappa) const { return horner(real_parts(coeffs), kappa); }
cd Dispersion::w_im(cd kappa) const { return horner(imag_parts(coeffs), kappa); }

cd w_eval(const Dispersion& d, cd kappa) {
  if (d.reaction_c) return kappa * kappa + *d.reaction_c;
  return horner(d.coeffs, kappa);
}

std::vector<Polynomial> c_coeffs(const Dispersion& d) {
  const int n = d.order;
  std::vector<Polynomial> out(n);
  const cd I(0.0, 1.0);
  cd phase = I;  // i * (-i)^j
  for (int j = 0; j < n; ++j) {
    Polynomial p;
    p.coeffs.assign(n - j, 0.0);
    for (int jp = j + 1; jp <= n; ++jp) p.coeffs[jp - 1 - j] = phase * d.coeffs[jp];
    out[j] = std::move(p);
    phase *= -I;
  }
  return out;
}

double BranchCutSet::distance(cd kappa) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Ray& r : cut_rays) best = std::min(best, ray_distance(kappa, r.origin, r.angle));
  return best;
}

BranchCutSet branch_cuts(const Dispersion& d) {
  BranchCutSet set;
  if (d.reaction_c) {
    const double c = *d.reaction_c;
    const double radius = std::pow(c * c + 1.0, 0.25);
    // kappa^2 = -c +- i
    const double half = 0.5 * std::atan(1.0 / c);
    for (double th : {0.5 * kPi - half, -0.5 * kPi + half, 0.5 * kPi + half, -0.5 * kPi - half}) {
      const cd p = std::polar(radius, th);
      set.branch_points.push_back(p);
      set.cut_rays.push_back({p, th});
    }
    return set;
  }
  const std::vector<cd> wr = real_parts(d.coeffs);
  std::vector<cd> q = poly_mul(wr, wr);
  q[0] += 1.0;
  for (const cd& p : poly_roots(q)) {
    set.branch_points.push_back(p);
    set.cut_rays.push_back({p, std::arg(p)});
  }
  return set;
}

OmegaPhat omega_phat(const Dispersion& d, cd kappa) {
  check_cut(d, kappa);
  const cd s = radial_root(d, kappa);
  const cd wr = d.reaction_c ? kappa * kappa + *d.reaction_c : d.w_re(kappa);
  const cd wi = d.reaction_c ? cd(0.0) : d.w_im(kappa);
  OmegaPhat r;
  r.omega = s + cd(0.0, 1.0) * wi;
  // (s - w_Re)(s + w_Re) = 1
  const cd plus = s + wr;
  const cd minus = s - wr;
  r.phat = (std::abs(plus) > std::abs(minus)) ? 1.0 / plus : minus;
  return r;
}

cd omega_eval(const Dispersion& d, cd kappa) { return omega_phat(d, kappa).omega; }

cd omegabar_eval(const Dispersion& d, cd kappa) {
  check_cut(d, kappa);
  const cd s = radial_root(d, kappa);
  const cd wi = d.reaction_c ? cd(0.0) : d.w_im(kappa);
  return s - cd(0.0, 1.0) * wi;
}

cd phat_eval(const Dispersion& d, cd kappa) { return omega_phat(d, kappa).phat; }

double contour_angle(double c) { return 0.25 * std::atan(1.0 / c); }

ContourFamily build_contour(const Dispersion& d, const QuadratureSpec& quad) {
  if (!d.reaction_c || d.deformation_unsupported) {
    throw Error(ErrorKind::InadmissibleContour,
                "contour deformation is only implemented for w(kappa) = kappa^2 + c");
  }
  if (!(quad.epsilon_origin > 0.0)) throw config_error("quadrature.epsilon_origin", "must be > 0");
  const double c = *d.reaction_c;
  const double theta = contour_angle(c);

  double R = quad.truncation_radius;
  if (R <= 0.0) {
    // Smallest radius with Re omega * t_min >= 40 on the right ray.
    const double t = std::max(quad.t_min, 1e-12);
    R = 1.0;
    while (omega_eval(d, std::polar(R, theta)).real() * t < 40.0 && R < 1e8) R *= 2.0;
    double lo = R / 2.0, hi = R;
    for (int i = 0; i < 60; ++i) {
      const double mid = 0.5 * (lo + hi);
      (omega_eval(d, std::polar(mid, theta)).real() * t < 40.0 ? lo : hi) = mid;
    }
    R = hi;
  }
  if (!(R > quad.epsilon_origin)) throw config_error("quadrature.truncation_radius", "must exceed epsilon_origin");

  ContourFamily fam;
  fam.branch_cuts = branch_cuts(d);
  fam.rays.push_back({kPi - theta, quad.epsilon_origin, R, -1});
  fam.rays.push_back({theta, quad.epsilon_origin, R, +1});

  double min_re = std::numeric_limits<double>::infinity();
  double min_dist = std::numeric_limits<double>::infinity();
  const int n = 2001;
  const double ratio = std::log(R / quad.epsilon_origin);
  for (const RayContour& ray : fam.rays) {
    for (int i = 0; i < n; ++i) {
      const double r = quad.epsilon_origin * std::exp(ratio * i / (n - 1));
      const cd kappa = std::polar(r, ray.angle);
      min_dist = std::min(min_dist, fam.branch_cuts.distance(kappa));
      min_re = std::min(min_re, omega_eval(d, kappa).real());
    }
  }
  fam.admissibility = {min_re, min_dist, 2 * n};
  if (!(min_re > 0.0) || !(min_dist > 0.0)) {
    throw Error(ErrorKind::InadmissibleContour,
                "contour fails admissibility: min Re omega = " + std::to_string(min_re) +
                    ", min cut distance = " + std::to_string(min_dist));
  }
  return fam;
}

cd delta_eval(cd kappa, double L) { return cd(0.0, 2.0) * std::sin(kappa * L); }

cd sine_ratio(cd kappa, double a, double L) {
  const cd I(0.0, 1.0);
  if (std::abs(kappa) * L < 1e-3) {
    const cd z2 = kappa * kappa;
    const double a2 = a * a, L2 = L * L;
    return (a / L) * (1.0 + z2 * (L2 - a2) / 6.0 +
                      z2 * z2 * (a2 * a2 / 120.0 - a2 * L2 / 36.0 + 7.0 * L2 * L2 / 360.0));
  }
  if (kappa.imag() >= 0.0) {
    return (std::exp(I * kappa * (L + a)) - std::exp(I * kappa * (L - a))) /
           (std::exp(2.0 * I * kappa * L) - 1.0);
  }
  return (std::exp(-I * kappa * (L - a)) - std::exp(-I * kappa * (L + a))) /
         (1.0 - std::exp(-2.0 * I * kappa * L));
}

}  // namespace uftlqr
