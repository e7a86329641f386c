#pragma once

#include <Eigen/Dense>
#include <vector>

#include "uftlqr/field.hpp"
#include "uftlqr/transforms.hpp"

namespace uftlqr {

// Second-order finite differences on N interior nodes of [0, L]. Dirichlet
// data enter through the first and last rows with weight 1 / dx^2.
struct GridModel {
  int N = 0;
  double L = 1.0;
  double c = 0.0;
  double dx = 0.0;
  std::vector<double> x;
  Eigen::MatrixXd A;
};

GridModel discretize(double c, double L, int N);

struct CareSolution {
  Eigen::MatrixXd P;
  Eigen::MatrixXd K;  // P / dx
  double residual = 0.0;
  int iterations = 0;
};

// Newton-Kleinman for A^T P + P A - P^2 / dx + dx I = 0 from a stabilizing
// multiple of dx I.
// A must be symmetric.
CareSolution solve_care(const Eigen::MatrixXd& A, double dx);
CareSolution solve_care(const GridModel& model);

double care_residual(const Eigen::MatrixXd& A, double dx, const Eigen::MatrixXd& P);

struct FdFields {
  Field state;
  Field control;
};

// Implicit trapezoid for phi' = (A - K) phi + boundary forcing, u = -K phi.
// Outputs are sampled on the interior nodes at the requested times.
FdFields simulate_closedloop(const GridModel& model, const CareSolution& care, const std::vector<double>& phi0,
                             const BoundarySignal& bc, const std::vector<double>& t_grid, double dt = 1e-3);

struct KernelComparison {
  double rel_frobenius = 0.0;
  int nodes = 0;  // interior nodes used per axis
};

// Relative Frobenius error of K / dx against (Gamma(x,xi) - Gamma(x,-xi)) / (2L)
// with M modes, restricted to the central `fraction` of nodes.
KernelComparison compare_kernel(const GridModel& model, const CareSolution& care, int M, double fraction = 0.8);

}  // namespace uftlqr
