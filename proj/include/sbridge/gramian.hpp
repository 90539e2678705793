#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <vector>

#include "sbridge/common.hpp"
#include "sbridge/linear_system.hpp"

namespace sbridge {

/// State transition matrix Phi(t1, t0) of dx = A(t) x dt, integrated with
/// classical RK4 on dPhi/dt = A(t) Phi starting from the identity.
inline Matrix state_transition(const LinearSystem& sys, double t0, double t1,
                               int steps = kDefaultOdeSteps) {
  if (steps < 1) throw DomainError("state_transition: steps must be >= 1");
  if (!(std::isfinite(t0) && std::isfinite(t1))) throw DomainError("state_transition: times must be finite");
  Matrix phi = Matrix::Identity(sys.n, sys.n);
  if (t0 == t1) return phi;
  const double h = (t1 - t0) / steps;
  for (int k = 0; k < steps; ++k) {
    const double t = t0 + k * h;
    const Matrix k1 = sys.A_at(t) * phi;
    const Matrix k2 = sys.A_at(t + 0.5 * h) * (phi + 0.5 * h * k1);
    const Matrix k3 = sys.A_at(t + 0.5 * h) * (phi + 0.5 * h * k2);
    const Matrix k4 = sys.A_at(t + h) * (phi + h * k3);
    phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  if (!phi.allFinite()) throw IntegrationError("state_transition: integration diverged");
  return phi;
}

/// Transition matrix plus controllability Gramian of the pair (A, B) on
/// [t0, t1], with the spectral pieces the rest of the library keeps reusing.
struct GramianBundle {
  double t0 = 0.0;
  double t1 = 1.0;
  Matrix Phi;         // Phi(t1, t0)
  Matrix M;           // int_{t0}^{t1} Phi(t1,s) B BT PhiT ds
  Matrix M_inv;
  Matrix M_sqrt;
  Matrix M_inv_sqrt;
  Vector eigvals;     // ascending
  Matrix eigvecs;     // columns, orthonormal
  double log_det_M = 0.0;

  int dim() const { return static_cast<int>(M.rows()); }
};

/// Integrates Psi(s) = Phi(t1, s) backwards (dPsi/ds = -Psi A(s), Psi(t1) = I)
/// and accumulates the Gramian with composite Simpson over the same nodes.
/// Throws UncontrollableError when M is numerically singular.
inline GramianBundle controllability_gramian(const LinearSystem& sys, double t0, double t1,
                                             int steps = kDefaultGramianSteps) {
  if (!(t1 > t0)) throw DomainError("controllability_gramian: need t1 > t0");
  if (steps < 2) throw DomainError("controllability_gramian: steps must be >= 2");
  if (steps % 2 != 0) ++steps;  // Simpson needs an even interval count

  const int n = sys.n;
  const double dt = (t1 - t0) / steps;

  // Backward RK4 sweep from s = t1 down to s = t0, recording the integrand
  // G(s) = Psi(s) B(s) B(s)^T Psi(s)^T at every node.
  Matrix psi = Matrix::Identity(n, n);
  std::vector<Matrix> g(steps + 1);
  auto integrand = [&](const Matrix& p, double s) {
    const Matrix pb = p * sys.B_at(s);
    return Matrix(pb * pb.transpose());
  };
  g[steps] = integrand(psi, t1);
  const double h = -dt;
  for (int k = steps; k > 0; --k) {
    const double s = t0 + k * dt;
    const Matrix k1 = -psi * sys.A_at(s);
    const Matrix k2 = -(psi + 0.5 * h * k1) * sys.A_at(s + 0.5 * h);
    const Matrix k3 = -(psi + 0.5 * h * k2) * sys.A_at(s + 0.5 * h);
    const Matrix k4 = -(psi + h * k3) * sys.A_at(s + h);
    psi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    g[k - 1] = integrand(psi, s + h);
  }
  if (!psi.allFinite()) throw IntegrationError("controllability_gramian: integration diverged");

  Matrix m = Matrix::Zero(n, n);
  for (int k = 0; k <= steps; ++k) {
    const double w = (k == 0 || k == steps) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
    m += w * g[k];
  }
  m *= dt / 3.0;
  m = Matrix(0.5 * (m + m.transpose()));

  GramianBundle out;
  out.t0 = t0;
  out.t1 = t1;
  out.Phi = psi;  // Psi(t0) = Phi(t1, t0)
  out.M = m;

  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw IntegrationError("controllability_gramian: eigensolver failed");
  out.eigvals = es.eigenvalues();
  out.eigvecs = es.eigenvectors();
  const double lam_max = out.eigvals(n - 1);
  const double lam_min = out.eigvals(0);
  if (!(lam_max > 0.0) || lam_min <= kSpdRtol * lam_max) {
    throw UncontrollableError("system is not controllable on [" + std::to_string(t0) + ", " +
                              std::to_string(t1) + "]: Gramian eigenvalues span [" +
                              std::to_string(lam_min) + ", " + std::to_string(lam_max) + "]");
  }

  const Vector sqrt_vals = out.eigvals.array().sqrt();
  out.M_sqrt = out.eigvecs * sqrt_vals.asDiagonal() * out.eigvecs.transpose();
  out.M_inv_sqrt = out.eigvecs * sqrt_vals.cwiseInverse().asDiagonal() * out.eigvecs.transpose();
  out.M_inv = out.eigvecs * out.eigvals.cwiseInverse().asDiagonal() * out.eigvecs.transpose();
  out.log_det_M = out.eigvals.array().log().sum();
  return out;
}

/// Minimum control energy moving the deterministic system (epsilon = 0) from
/// x0 at t0 to x1 at t1: (x1 - Phi x0)^T M^{-1} (x1 - Phi x0), evaluated in
/// the Gramian eigenbasis.
inline double min_energy_transfer_cost(const GramianBundle& g, const Vector& x0, const Vector& x1) {
  require_dim(static_cast<int>(x0.size()), g.dim(), "min_energy_transfer_cost: x0");
  require_dim(static_cast<int>(x1.size()), g.dim(), "min_energy_transfer_cost: x1");
  const Vector r = x1 - g.Phi * x0;
  const Vector a = g.eigvecs.transpose() * r;
  double cost = 0.0;
  for (int i = 0; i < a.size(); ++i) cost += a(i) * a(i) / g.eigvals(i);
  return cost;
}

}  // namespace sbridge
