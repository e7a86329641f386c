#pragma once

#include <optional>
#include <vector>

#include "uftlqr/field.hpp"
#include "uftlqr/problem.hpp"

namespace uftlqr {

// Control integrands at one contour node.
struct ContourIntegrands {
  // Raw U1, U2 as displayed; may overflow for large |kappa| or t.
  cd U1;
  cd U2;
  // e^{-omega t} U1 / Delta and U2 / Delta, bounded on the upper contour.
  cd scaled1;
  cd over_delta2;
  cd omega;
  cd phat;
};

ContourIntegrands contour_integrands(const Problem& p, cd kappa, double x, double t);

struct ContourPoint {
  cd control;
  cd state;
  double control_err = 0.0;
  double state_err = 0.0;
  // |real-line term|, |p-hat U1 term|, |U2 term| of the control
  double term_magnitude[3] = {0.0, 0.0, 0.0};
  long evals = 0;
};

// Evaluates both fields at interior points. The contour angle can be
// overridden to probe a deliberately wrong deformation.
class ContourEvaluator {
 public:
  ContourEvaluator(Problem p, QuadratureSpec quad, std::optional<double> angle_override = {});

  ContourPoint eval(double x, double t) const;

  const Problem& problem() const { return p_; }
  double angle() const { return theta_; }
  // Radius past which the initial-data part of the ray integrands is below e^{-40}.
  double initial_radius(double t) const;
  // Radius past which the boundary part is below e^{-40}.
  double boundary_radius(double x) const;

 private:
  Problem p_;
  QuadratureSpec quad_;
  double theta_ = 0.0;
};

struct PointValue {
  cd value;
  double error = 0.0;
};

PointValue control_integral_eval(const Problem& p, double x, double t, const QuadratureSpec& quad = {});
PointValue state_integral_eval(const Problem& p, double x, double t, const QuadratureSpec& quad = {});

struct ContourFields {
  Field control;
  Field state;
};

// Evaluates every (x, t) node in parallel. Requires 0 < x < L and t >= t_min.
ContourFields contour_fields(const Problem& p, const std::vector<double>& x, const std::vector<double>& t,
                             const QuadratureSpec& quad = {});

struct VanishingResult {
  double residual = 0.0;
  double error = 0.0;
  double radius = 0.0;
  bool converged = true;
};

// |int over the truncated upper contour of the unknown-boundary-value terms|.
// phi-hat(kappa, t) comes from the series state with M modes. radius <= 0
// selects sin(theta) min(x, L - x) R = 20.
VanishingResult vanishing_term_check(const Problem& p, double x, double t, double radius = 0.0, int M = 40,
                                     std::optional<double> angle_override = {});

// (1/2pi) int_{-K}^{K} e^{ikx} v(k) sigma(k/K) dk for the boundary tuple
// (g, h) with a smooth window sigma that is 1 on |s| < 1/2.
cd u3_bandlimited_check(const Dispersion& d, double L, const std::vector<cd>& g, const std::vector<cd>& h,
                        double x, double K);

struct JordanProbe {
  double R0 = 0.0;
  double max_abs[3] = {0.0, 0.0, 0.0};  // at R0, 2R0, 4R0
  bool decays = false;
};

// Max of the initial-data ray integrand over arcs |kappa| = R between the
// contour rays and the real axis, at R0, 2R0 and 4R0.
JordanProbe jordan_probe(const Problem& p, double x, double t, double R0);

}  // namespace uftlqr
