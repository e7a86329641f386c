#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "uftlqr/quadrature.hpp"

namespace uftlqr {

using cd = std::complex<double>;

// Polynomial in one complex variable, coefficients in ascending powers.
struct Polynomial {
  std::vector<cd> coeffs;
  cd operator()(cd z) const;
};

// Dispersion polynomial w(kappa) = sum_j alpha_j kappa^j.
struct Dispersion {
  std::vector<cd> coeffs;
  int order = 0;
  // Set when w(kappa) = kappa^2 + c.
  std::optional<double> reaction_c;
  // Branch-point modulus (c^2+1)^{1/4} and angle arctan(1/c)/2, cached for
  // the reaction-diffusion case.
  double rd_branch_radius = 0.0;
  double rd_branch_angle = 0.0;
  // w has a non-zero imaginary part on the real line; representable but the
  // contour pipeline refuses it.
  bool deformation_unsupported = false;

  // Validates alpha_n != 0 and Re w(k) >= 0 on k in [-100, 100].
  static Dispersion from_coeffs(std::vector<cd> coeffs);
  static Dispersion reaction_diffusion(double c);

  // Real-line real and imaginary parts, continued as polynomials.
  cd w_re(cd kappa) const;
  cd w_im(cd kappa) const;
};

cd w_eval(const Dispersion& d, cd kappa);

// c_j(kappa), j = 0..n-1, from i (w(kappa) - w(l)) / (kappa - l) with l^j
// mapped to the j-th spatial derivative.
std::vector<Polynomial> c_coeffs(const Dispersion& d);

struct BranchCutSet {
  std::vector<cd> branch_points;
  struct Ray {
    cd origin;
    double angle;
  };
  std::vector<Ray> cut_rays;

  // Euclidean distance from kappa to the closest cut ray.
  double distance(cd kappa) const;
};

BranchCutSet branch_cuts(const Dispersion& d);

// sqrt(w_Re^2 + 1) + i w_Im on the sheet reached by radial continuation from
// the origin, where the root is positive. Throws BranchCutViolation on a cut.
cd omega_eval(const Dispersion& d, cd kappa);
cd omegabar_eval(const Dispersion& d, cd kappa);
cd phat_eval(const Dispersion& d, cd kappa);

// omega and phat together; phat is formed from whichever of omega -/+ w_Re
// avoids cancellation.
struct OmegaPhat {
  cd omega;
  cd phat;
};
OmegaPhat omega_phat(const Dispersion& d, cd kappa);

struct RayContour {
  double angle = 0.0;
  double origin_offset = 1e-4;
  double truncation_radius = 0.0;
  // +1 traversed outward from the origin, -1 inward.
  int orientation = 1;
};

struct AdmissibilityReport {
  double min_re_omega = 0.0;
  double min_cut_distance = 0.0;
  int samples = 0;
};

struct ContourFamily {
  std::vector<RayContour> rays;
  BranchCutSet branch_cuts;
  AdmissibilityReport admissibility;
};

double contour_angle(double c);

// The two rays of the upper contour, traversed from the left ray (inward) to
// the right ray (outward).
ContourFamily build_contour(const Dispersion& d, const QuadratureSpec& quad);

cd delta_eval(cd kappa, double L);

// sin(kappa a) / sin(kappa L) for Im kappa >= 0, 0 <= a <= L, stable for
// large Im kappa and continuous through kappa = 0.
cd sine_ratio(cd kappa, double a, double L);

}  // namespace uftlqr
