#include "uftlqr/problem.hpp"

#include "uftlqr/errors.hpp"

namespace uftlqr {

Problem Problem::make(double c, double L, SpatialProfile phi0, BoundarySignal bc) {
  if (!(L > 0.0)) throw config_error("equation.L", "must be > 0");
  if (std::abs(phi0.length() - L) > 1e-12 * L)
    throw config_error("initial", "profile length does not match equation.L");
  Problem p{Dispersion::reaction_diffusion(c), L, std::move(phi0), std::move(bc)};
  return p;
}

}  // namespace uftlqr
