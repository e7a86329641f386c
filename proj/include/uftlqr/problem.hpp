#pragma once

#include "uftlqr/spectral.hpp"
#include "uftlqr/transforms.hpp"

namespace uftlqr {

// Reaction-diffusion LQR problem on [0, L]: phi_t = phi_xx - c phi + u with
// Dirichlet data g0, h0 and initial condition phi0.
struct Problem {
  Dispersion d;
  double L = 1.0;
  SpatialProfile phi0;
  BoundarySignal bc;

  static Problem make(double c, double L, SpatialProfile phi0, BoundarySignal bc = {});
};

}  // namespace uftlqr
