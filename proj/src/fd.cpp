#include "uftlqr/fd.hpp"

#include <cmath>
#include <string>

#include "uftlqr/errors.hpp"
#include "uftlqr/series.hpp"

namespace uftlqr {

GridModel discretize(double c, double L, int N) {
  if (N < 16) throw config_error("oracle.N", "must be >= 16");
  if (!(L > 0.0)) throw config_error("equation.L", "must be > 0");
  GridModel m;
  m.N = N;
  m.L = L;
  m.c = c;
  m.dx = L / (N + 1);
  const double s = 1.0 / (m.dx * m.dx);
  m.A = Eigen::MatrixXd::Zero(N, N);
  for (int i = 0; i < N; ++i) {
    m.A(i, i) = -2.0 * s - c;
    if (i > 0) m.A(i, i - 1) = s;
    if (i + 1 < N) m.A(i, i + 1) = s;
    m.x.push_back(m.dx * (i + 1));
  }
  return m;
}

double care_residual(const Eigen::MatrixXd& A, double dx, const Eigen::MatrixXd& P) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd r =
      A.transpose() * P + P * A - P * P / dx + dx * Eigen::MatrixXd::Identity(n, n);
  return r.norm();
}

CareSolution solve_care(const Eigen::MatrixXd& A, double dx) {
  const Eigen::Index n = A.rows();
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
  CareSolution s;
  // Newton-Kleinman needs a stabilizing start; shift past the Gershgorin bound.
  double lmax = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) lmax = std::max(lmax, A(i, i) + A.row(i).cwiseAbs().sum() - std::abs(A(i, i)));
  s.P = dx * (lmax + 1.0) * I;
  double best = care_residual(A, dx, s.P);
  for (int it = 1; it <= 50; ++it) {
    // Closed-loop Lyapunov solve (A - P/dx)^T X + X (A - P/dx) = -(dx I + P^2/dx)
    // in the eigenbasis of the symmetric closed-loop matrix.
    Eigen::MatrixXd Ac = A - s.P / dx;
    Ac = 0.5 * (Ac + Ac.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Ac);
    if (eig.info() != Eigen::Success)
      throw Error(ErrorKind::NewtonDivergence, "eigendecomposition failed in Lyapunov step");
    const Eigen::VectorXd& lam = eig.eigenvalues();
    const Eigen::MatrixXd& V = eig.eigenvectors();
    Eigen::MatrixXd rhs = V.transpose() * (dx * I + s.P * s.P / dx) * V;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) rhs(i, j) = -rhs(i, j) / (lam(i) + lam(j));
    s.P = V * rhs * V.transpose();
    s.P = 0.5 * (s.P + s.P.transpose());
    s.iterations = it;
    const double res = care_residual(A, dx, s.P);
    if (!std::isfinite(res)) break;
    if (res <= 1e-10 || (res >= 0.5 * best && res <= 1e-9 * s.P.norm())) {
      s.residual = res;
      s.K = s.P / dx;
      return s;
    }
    best = std::min(best, res);
  }
  throw Error(ErrorKind::NewtonDivergence,
              "Newton-Kleinman stalled at residual " + std::to_string(best) + " after 50 iterations");
}

CareSolution solve_care(const GridModel& model) { return solve_care(model.A, model.dx); }

FdFields simulate_closedloop(const GridModel& model, const CareSolution& care, const std::vector<double>& phi0,
                             const BoundarySignal& bc, const std::vector<double>& t_grid, double dt) {
  const int N = model.N;
  if (static_cast<int>(phi0.size()) != N) throw Error(ErrorKind::GridMismatch, "phi0 must have N samples");
  if (!(dt > 0.0)) throw config_error("oracle.dt", "must be > 0");
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0.0 || (i > 0 && t_grid[i] <= t_grid[i - 1]))
      throw config_error("grid.t", "times must be >= 0 and strictly increasing");
  }
  const Eigen::MatrixXd Mc = model.A - care.K;
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(N, N);
  const double inj = 1.0 / (model.dx * model.dx);
  auto forcing = [&](double t) {
    Eigen::VectorXd f = Eigen::VectorXd::Zero(N);
    f(0) += inj * bc.g0(t);
    f(N - 1) += inj * bc.h0(t);
    return f;
  };

  FdFields out{Field(model.x, t_grid, Method::Oracle), Field(model.x, t_grid, Method::Oracle)};
  Eigen::VectorXd phi = Eigen::Map<const Eigen::VectorXd>(phi0.data(), N);
  auto record = [&](size_t it) {
    const Eigen::VectorXd u = -care.K * phi;
    for (int i = 0; i < N; ++i) {
      out.state.at(it, i) = phi(i);
      out.control.at(it, i) = u(i);
    }
  };

  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  double lu_dt = -1.0;
  double t = 0.0;
  for (size_t it = 0; it < t_grid.size(); ++it) {
    const double target = t_grid[it];
    while (t < target - 1e-14) {
      const double h = std::min(dt, target - t);
      if (h != lu_dt) {
        lu.compute(I - 0.5 * h * Mc);
        lu_dt = h;
      }
      const Eigen::VectorXd rhs = phi + 0.5 * h * (Mc * phi) + 0.5 * h * (forcing(t) + forcing(t + h));
      phi = lu.solve(rhs);
      if (!phi.allFinite()) throw Error(ErrorKind::LinearSolveFailure, "closed-loop step produced non-finite state");
      t += h;
    }
    record(it);
  }
  return out;
}

KernelComparison compare_kernel(const GridModel& model, const CareSolution& care, int M, double fraction) {
  const int N = model.N;
  const int skip = static_cast<int>(std::floor(0.5 * (1.0 - fraction) * N));
  const int lo = skip, hi = N - skip;
  std::vector<double> xs(model.x.begin() + lo, model.x.begin() + hi);
  const KernelMatrix km = build_kernel_matrix(Dispersion::reaction_diffusion(model.c), model.L, M, xs, xs);
  const Eigen::MatrixXd fd = care.K.block(lo, lo, hi - lo, hi - lo) / model.dx;
  KernelComparison out;
  out.nodes = hi - lo;
  out.rel_frobenius = (fd - km.combined).norm() / km.combined.norm();
  return out;
}

}  // namespace uftlqr
