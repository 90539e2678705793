#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sbridge/common.hpp"
#include "sbridge/discrete_measure.hpp"
#include "sbridge/gramian.hpp"
#include "sbridge/kernels.hpp"

namespace sbridge {

namespace detail {

/// Squared pairwise distances between column sets, clamped at zero.
inline Matrix pairwise_sq_dists(const Matrix& a, const Matrix& b) {
  const Vector a2 = a.colwise().squaredNorm();
  const Vector b2 = b.colwise().squaredNorm();
  Matrix d2 = (-2.0 * (a.transpose() * b));
  d2.colwise() += a2;
  d2.rowwise() += b2.transpose();
  return d2.cwiseMax(0.0);
}

}  // namespace detail

/// log K_ij = log q(0, x_i, 1, y_j) for the classical kernel.
inline Matrix log_kernel_matrix(double epsilon, const DiscreteMeasure& mu0,
                                const DiscreteMeasure& mu1) {
  if (!(epsilon > 0.0)) throw DomainError("kernel matrix: epsilon must be positive");
  require_dim(mu1.dim(), mu0.dim(), "kernel matrix: target dimension");
  const double n = mu0.dim();
  const double c = -0.5 * n * std::log(4.0 * M_PI * epsilon);
  return (detail::pairwise_sq_dists(mu0.points, mu1.points) / (-4.0 * epsilon)).array() + c;
}

/// log K_ij for the linear kernel over the bundle's interval, evaluated in
/// whitened coordinates.
inline Matrix log_kernel_matrix(const GramianBundle& g, double epsilon, const DiscreteMeasure& mu0,
                                const DiscreteMeasure& mu1) {
  if (!(epsilon > 0.0)) throw DomainError("kernel matrix: epsilon must be positive");
  require_dim(mu0.dim(), g.dim(), "kernel matrix: source dimension");
  require_dim(mu1.dim(), g.dim(), "kernel matrix: target dimension");
  const double n = g.dim();
  const double c = -0.5 * (n * std::log(4.0 * M_PI * epsilon) + g.log_det_M);
  const Matrix u = g.M_inv_sqrt * (g.Phi * mu0.points);
  const Matrix v = g.M_inv_sqrt * mu1.points;
  return (detail::pairwise_sq_dists(u, v) / (-4.0 * epsilon)).array() + c;
}

/// Hilbert projective distance between positive vectors:
/// log max(u/v) + log max(v/u).
inline double hilbert_metric(const Vector& u, const Vector& v) {
  require_dim(v.size(), u.size(), "hilbert_metric: v");
  if ((u.array() <= 0.0).any() || (v.array() <= 0.0).any())
    throw DomainError("hilbert_metric: entries must be strictly positive");
  const Vector d = u.array().log() - v.array().log();
  return d.maxCoeff() - d.minCoeff();
}

/// Same metric on log-vectors (exact form used internally).
inline double hilbert_metric_log(const Vector& log_u, const Vector& log_v) {
  require_dim(log_v.size(), log_u.size(), "hilbert_metric_log: v");
  const Vector d = log_u - log_v;
  return d.maxCoeff() - d.minCoeff();
}

/// Solution potentials of the two-marginal system, stored in log space.
/// Gauge: the weighted mean of log phi_1 is zero.
struct SchrodingerPotentials {
  Vector log_phi_hat_0;
  Vector log_phi_1;
  std::string gauge = "weighted mean of log phi_1 is zero";

  Vector phi_hat_0() const { return log_phi_hat_0.array().exp(); }
  Vector phi_1() const { return log_phi_1.array().exp(); }
};

struct PassRecord {
  int pass = 0;
  double hilbert_distance = 0.0;       // d(phi_1 iterates) for this pass
  double ratio = std::numeric_limits<double>::quiet_NaN();  // vs previous pass
  double residual_rho0 = 0.0;          // max |phi0_hat (K W1 phi1) - rho0|
  double residual_rho1 = 0.0;          // max |phi1 (K^T W0 phi0_hat) - rho1|
  double hilbert_distance_phi0 = 0.0;  // secondary telemetry
};

/// Distance floor below which successive changes are roundoff, not signal.
inline double contraction_noise_floor() {
  return 1e3 * std::numeric_limits<double>::epsilon();
}

/// kappa_hat = max usable successive ratio d_{k+1}/d_k. Needs at least three
/// finite distances above the noise floor, otherwise the estimate is undefined.
inline std::optional<double> empirical_contraction(const std::vector<PassRecord>& history) {
  const double floor = contraction_noise_floor();
  int usable = 0;
  for (const auto& r : history)
    if (std::isfinite(r.hilbert_distance) && r.hilbert_distance > floor) ++usable;
  if (usable < 3) return std::nullopt;
  std::optional<double> kappa;
  for (size_t k = 0; k + 1 < history.size(); ++k) {
    const double d0 = history[k].hilbert_distance;
    const double d1 = history[k + 1].hilbert_distance;
    if (std::isfinite(d0) && std::isfinite(d1) && d0 > floor && d1 > floor) {
      const double ratio = d1 / d0;
      if (!kappa || ratio > *kappa) kappa = ratio;
    }
  }
  return kappa;
}

struct BridgeSolution {
  SchrodingerPotentials potentials;
  std::vector<PassRecord> history;
  std::optional<double> kappa_hat;
  double gamma = std::numeric_limits<double>::quiet_NaN();  // a-priori bound, when supplied
  int iterations = 0;
  bool converged = false;
};

struct SinkhornOptions {
  double tol = 1e-12;
  int max_pass = 2000;
  double gamma = std::numeric_limits<double>::quiet_NaN();  // recorded, not used
  const Vector* initial_log_phi_1 = nullptr;                // defaults to zeros
};

/// Alternating enforcement of the two marginals through the kernel, in log
/// space. One pass updates phi_hat_0 then phi_1; iteration stops when the
/// Hilbert-metric change of phi_1 drops below tol. Non-convergence within
/// max_pass is reported through the `converged` flag, not an exception.
inline BridgeSolution sinkhorn_solve(const Matrix& log_k, const DiscreteMeasure& mu0,
                                     const DiscreteMeasure& mu1, const SinkhornOptions& opt = {}) {
  const int k0 = mu0.size(), k1 = mu1.size();
  require_dim(log_k.rows(), k0, "sinkhorn: kernel rows");
  require_dim(log_k.cols(), k1, "sinkhorn: kernel cols");
  if (!(opt.tol > 0.0)) throw DomainError("sinkhorn: tol must be positive");
  if (opt.max_pass < 1) throw DomainError("sinkhorn: max_pass must be >= 1");
  if ((mu0.densities.array() <= 0.0).any() || (mu1.densities.array() <= 0.0).any())
    throw DomainError("sinkhorn: atoms with zero density must be dropped before solving");

  const Vector log_rho0 = mu0.densities.array().log();
  const Vector log_rho1 = mu1.densities.array().log();
  const Vector log_w0 = mu0.weights.array().log();
  const Vector log_w1 = mu1.weights.array().log();

  Vector log_phi1 = opt.initial_log_phi_1 ? *opt.initial_log_phi_1 : Vector::Zero(k1);
  require_dim(log_phi1.size(), k1, "sinkhorn: initial potential");
  Vector log_phi0 = Vector::Zero(k0);

  // log sum_j exp(log_k_ij + log w_j + log phi1_j), one row at a time
  Vector row_acc(k1), col_acc(k0);
  const auto lse_rows = [&](const Vector& lp1) {
    Vector out(k0);
    for (int i = 0; i < k0; ++i) {
      row_acc = log_k.row(i).transpose() + log_w1 + lp1;
      out(i) = log_sum_exp(row_acc);
    }
    return out;
  };
  const auto lse_cols = [&](const Vector& lp0) {
    Vector out(k1);
    for (int j = 0; j < k1; ++j) {
      col_acc = log_k.col(j) + log_w0 + lp0;
      out(j) = log_sum_exp(col_acc);
    }
    return out;
  };

  BridgeSolution sol;
  sol.gamma = opt.gamma;
  Vector prev_phi1 = log_phi1, prev_phi0 = log_phi0;
  double prev_distance = std::numeric_limits<double>::quiet_NaN();
  Vector r_rows = lse_rows(log_phi1);  // log(K W1 phi1), reused across passes

  for (int pass = 1; pass <= opt.max_pass; ++pass) {
    log_phi0 = log_rho0 - r_rows;
    const Vector s1 = lse_cols(log_phi0);
    log_phi1 = log_rho1 - s1;

    // gauge: weighted mean of log phi1 pinned to zero; the pairing is
    // preserved by countershifting phi_hat_0
    const double shift = mu1.weights.dot(log_phi1) / mu1.weights.sum();
    log_phi1.array() -= shift;
    log_phi0.array() += shift;

    PassRecord rec;
    rec.pass = pass;
    rec.hilbert_distance = pass == 1 ? std::numeric_limits<double>::quiet_NaN()
                                     : hilbert_metric_log(log_phi1, prev_phi1);
    rec.hilbert_distance_phi0 =
        pass == 1 ? std::numeric_limits<double>::quiet_NaN() : hilbert_metric_log(log_phi0, prev_phi0);
    rec.ratio = rec.hilbert_distance / prev_distance;  // NaN propagates harmlessly

    // marginal residuals: rho1 holds by construction, rho0 reflects progress
    r_rows = lse_rows(log_phi1);
    const Vector back0 = (log_phi0 + r_rows).array().exp();
    const Vector back1 = (log_phi1 + s1).array().exp() * std::exp(shift);
    rec.residual_rho0 = (back0 - mu0.densities).cwiseAbs().maxCoeff();
    rec.residual_rho1 = (back1 - mu1.densities).cwiseAbs().maxCoeff();
    sol.history.push_back(rec);

    sol.iterations = pass;
    if (pass > 1 && rec.hilbert_distance < opt.tol) {
      sol.converged = true;
      break;
    }
    prev_phi1 = log_phi1;
    prev_phi0 = log_phi0;
    prev_distance = rec.hilbert_distance;
  }

  sol.potentials.log_phi_hat_0 = log_phi0;
  sol.potentials.log_phi_1 = log_phi1;
  sol.kappa_hat = empirical_contraction(sol.history);
  return sol;
}

}  // namespace sbridge
