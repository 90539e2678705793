#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <vector>

#include "sbridge/common.hpp"
#include "sbridge/discrete_measure.hpp"
#include "sbridge/gramian.hpp"
#include "sbridge/linear_system.hpp"
#include "sbridge/sinkhorn.hpp"

namespace sbridge {

namespace detail {

/// Gramian resolution proportional to the sub-interval length, floored so
/// short horizons near the endpoints stay well resolved.
inline int interval_steps(double length) {
  return std::max(16, static_cast<int>(std::ceil(length * kDefaultGramianSteps)));
}

inline GramianBundle interior_gramian(const LinearSystem& sys, double t0, double t1) {
  try {
    return controllability_gramian(sys, t0, t1, interval_steps(t1 - t0));
  } catch (const UncontrollableError& e) {
    throw UncontrollableError(std::string(e.what()) +
                              " (sub-interval Gramian; try a different interior time)");
  }
}

}  // namespace detail

/// Space-time factor values phi_hat(t, x) and phi(t, x) at query columns,
/// kept in log form; their product is the controlled state density.
struct FactorValues {
  Vector log_phi_hat;
  Vector log_phi;

  Vector phi_hat() const { return log_phi_hat.array().exp(); }
  Vector phi() const { return log_phi.array().exp(); }
};

/// phi_hat(t,x) = sum_i w0_i phihat0_i q(0, x_i, t, x) and
/// phi(t,x)     = sum_j w1_j phi1_j   q(t, x, 1, y_j),
/// with the kernels taken over the sub-intervals [0,t] and [t,1].
inline FactorValues schrodinger_factors(const LinearSystem& sys,
                                        const SchrodingerPotentials& pots,
                                        const DiscreteMeasure& mu0, const DiscreteMeasure& mu1,
                                        double t, const Matrix& queries) {
  if (!(t > 0.0 && t < 1.0))
    throw DomainError(
        "schrodinger_factors: the sub-interval kernel is singular at the horizon endpoints; "
        "evaluate at an interior time in (0,1)");
  require_dim(queries.rows(), sys.n, "schrodinger_factors: query dimension");
  require_dim(pots.log_phi_hat_0.size(), mu0.size(), "schrodinger_factors: phi_hat_0");
  require_dim(pots.log_phi_1.size(), mu1.size(), "schrodinger_factors: phi_1");
  if (!all_finite(queries)) throw DomainError("schrodinger_factors: non-finite query");

  const double eps = sys.epsilon;
  const double ncoef = 0.5 * sys.n * std::log(4.0 * M_PI * eps);
  const auto g0 = detail::interior_gramian(sys, 0.0, t);
  const auto g1 = detail::interior_gramian(sys, t, 1.0);
  const int q = static_cast<int>(queries.cols());

  FactorValues out;
  out.log_phi_hat.resize(q);
  out.log_phi.resize(q);

  // backward factor: sources are mapped through Phi(t,0), queries are targets
  {
    const Matrix u = g0.M_inv_sqrt * (g0.Phi * mu0.points);
    const Matrix z = g0.M_inv_sqrt * queries;
    const Matrix d2 = detail::pairwise_sq_dists(z, u);
    const Vector logits0 = mu0.weights.array().log() + pots.log_phi_hat_0.array();
    const double c0 = -ncoef - 0.5 * g0.log_det_M;
    Vector acc(mu0.size());
    for (int p = 0; p < q; ++p) {
      acc = logits0 - d2.row(p).transpose() / (4.0 * eps);
      out.log_phi_hat(p) = c0 + log_sum_exp(acc);
    }
  }
  // forward factor: queries are mapped through Phi(1,t), atoms are targets
  {
    const Matrix z = g1.M_inv_sqrt * (g1.Phi * queries);
    const Matrix v = g1.M_inv_sqrt * mu1.points;
    const Matrix d2 = detail::pairwise_sq_dists(z, v);
    const Vector logits1 = mu1.weights.array().log() + pots.log_phi_1.array();
    const double c1 = -ncoef - 0.5 * g1.log_det_M;
    Vector acc(mu1.size());
    for (int p = 0; p < q; ++p) {
      acc = logits1 - d2.row(p).transpose() / (4.0 * eps);
      out.log_phi(p) = c1 + log_sum_exp(acc);
    }
  }
  return out;
}

/// Closed-loop evaluator of u(t,x) = 2 eps B(t)^T grad_x log phi(t,x) for a
/// discrete terminal potential. The gradient is analytic: in whitened
/// coordinates z = M^{-1/2} Phi(1,t) x the forward factor is a Gaussian
/// mixture over the whitened atoms, so grad_z log phi = (vbar - z)/(2 eps)
/// with vbar the softmax-weighted atom mean.
class BridgeController {
 public:
  BridgeController(LinearSystem sys, const SchrodingerPotentials& pots, const DiscreteMeasure& mu1)
      : sys_(std::move(sys)), atoms_(mu1.points) {
    require_dim(atoms_.rows(), sys_.n, "bridge controller: atom dimension");
    require_dim(pots.log_phi_1.size(), atoms_.cols(), "bridge controller: phi_1 length");
    log_mass_ = mu1.weights.array().log() + pots.log_phi_1.array();
  }

  const LinearSystem& system() const { return sys_; }

  /// Batch control for state columns; a column where phi underflows (the
  /// state is far outside the bridge mass) comes back as NaN.
  Matrix control(double t, const Matrix& states) const {
    require_dim(states.rows(), sys_.n, "bridge controller: state dimension");
    const auto& c = cache_for(t);
    const double eps = sys_.epsilon;
    const int paths = static_cast<int>(states.cols());
    const Matrix z = c.S * states;                            // whitened states
    Matrix logits = (c.V.transpose() * z) / (2.0 * eps);      // atoms x paths
    logits.colwise() += c.b;

    Matrix u(sys_.m, paths);
    Vector col(atoms_.cols());
    for (int p = 0; p < paths; ++p) {
      col = logits.col(p);
      const double lse = log_sum_exp(col);
      const double log_phi = c.c0 - z.col(p).squaredNorm() / (4.0 * eps) + lse;
      if (!(log_phi > kLogUnderflow)) {
        u.col(p).setConstant(std::numeric_limits<double>::quiet_NaN());
        continue;
      }
      const Vector soft = (col.array() - lse).exp();
      u.col(p) = -c.G * (z.col(p) - c.V * soft);
    }
    return u;
  }

  /// Single-state form; underflow is an error rather than a NaN flag.
  Vector control_at(double t, const Vector& x) const {
    const Matrix u = control(t, Matrix(x));
    if (!u.allFinite())
      throw EvaluationError(
          "optimal_control: phi underflowed at the query state (below 1e-300); the state lies "
          "outside the support of the bridge");
    return u.col(0);
  }

 private:
  struct Cache {
    Matrix S;   // M^{-1/2} Phi(1,t)
    Matrix G;   // B(t)^T Phi(1,t)^T M^{-1/2}
    Matrix V;   // whitened terminal atoms
    Vector b;   // logit constants log w_j + log phi1_j - |v_j|^2/(4 eps)
    double c0;  // log-normalizer of the sub-interval kernel
  };

  static constexpr double kLogUnderflow = -690.77552789821368;  // log(1e-300)

  const Cache& cache_for(double t) const {
    if (!(t >= 0.0 && t < 1.0))
      throw DomainError("bridge controller: control is defined for t in [0,1)");
    const auto hit = cache_.find(t);
    if (hit != cache_.end()) return hit->second;
    const auto g = detail::interior_gramian(sys_, t, 1.0);
    Cache c;
    c.S = g.M_inv_sqrt * g.Phi;
    c.G = sys_.B_at(t).transpose() * g.Phi.transpose() * g.M_inv_sqrt;
    c.V = g.M_inv_sqrt * atoms_;
    c.b = log_mass_ - c.V.colwise().squaredNorm().transpose() / (4.0 * sys_.epsilon);
    c.c0 = -0.5 * (sys_.n * std::log(4.0 * M_PI * sys_.epsilon) + g.log_det_M);
    return cache_.emplace(t, std::move(c)).first->second;
  }

  LinearSystem sys_;
  Matrix atoms_;
  Vector log_mass_;
  mutable std::map<double, Cache> cache_;
};

/// One-shot form of the optimal control law.
inline Vector optimal_control(const LinearSystem& sys, const SchrodingerPotentials& pots,
                              const DiscreteMeasure& mu1, double t, const Vector& x) {
  return BridgeController(sys, pots, mu1).control_at(t, x);
}

/// Batch control closure: maps (t, states) to one input column per state.
using ControlClosure = std::function<Matrix(double, const Matrix&)>;

inline ControlClosure zero_control(int m) {
  return [m](double, const Matrix& states) { return Matrix::Zero(m, states.cols()); };
}

struct SimulationResult {
  Matrix terminal;            // state columns; excluded paths are NaN
  std::vector<char> failed;   // per-path exclusion flags
  int excluded = 0;

  int surviving() const { return static_cast<int>(failed.size()) - excluded; }

  Vector terminal_mean() const {
    if (surviving() == 0) throw DomainError("simulation: every path was excluded");
    Vector mean = Vector::Zero(terminal.rows());
    for (int p = 0; p < terminal.cols(); ++p)
      if (!failed[p]) mean += terminal.col(p);
    return mean / surviving();
  }

  Matrix terminal_covariance() const {
    const Vector mean = terminal_mean();
    Matrix cov = Matrix::Zero(terminal.rows(), terminal.rows());
    for (int p = 0; p < terminal.cols(); ++p) {
      if (failed[p]) continue;
      const Vector r = terminal.col(p) - mean;
      cov += r * r.transpose();
    }
    return cov / surviving();
  }
};

/// Euler-Maruyama on dx = (A x + B u) dt + sqrt(2 eps) B dW over [0,1].
/// Initial states cycle through the supplied columns; a path whose state
/// stops being finite (e.g. its control evaluation failed) is flagged and
/// excluded from the terminal statistics.
inline SimulationResult simulate_bridge(const LinearSystem& sys, const ControlClosure& control,
                                        const Matrix& x0, int step_count, int path_count,
                                        std::uint64_t seed) {
  if (step_count < 1) throw DomainError("simulate_bridge: step count must be >= 1");
  if (path_count < 1) throw DomainError("simulate_bridge: path count must be >= 1");
  require_dim(x0.rows(), sys.n, "simulate_bridge: initial states");
  if (x0.cols() < 1) throw DomainError("simulate_bridge: need at least one initial state");
  if (!all_finite(x0)) throw DomainError("simulate_bridge: non-finite initial state");

  Matrix x(sys.n, path_count);
  for (int p = 0; p < path_count; ++p) x.col(p) = x0.col(p % x0.cols());

  const double dt = 1.0 / step_count;
  const double noise_scale = std::sqrt(2.0 * sys.epsilon * dt);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  SimulationResult out;
  out.failed.assign(path_count, 0);
  Matrix xi(sys.m, path_count);

  for (int k = 0; k < step_count; ++k) {
    const double t = k * dt;
    const Matrix a = sys.A_at(t);
    const Matrix b = sys.B_at(t);
    const Matrix u = control(t, x);
    require_dim(u.rows(), sys.m, "simulate_bridge: control rows");
    require_dim(u.cols(), path_count, "simulate_bridge: control cols");
    for (int i = 0; i < xi.size(); ++i) xi.data()[i] = gauss(rng);
    x += dt * (a * x + b * u) + noise_scale * (b * xi);
    for (int p = 0; p < path_count; ++p) {
      if (!out.failed[p] && !x.col(p).allFinite()) {
        out.failed[p] = 1;
        ++out.excluded;
      }
    }
  }
  for (int p = 0; p < path_count; ++p)
    if (out.failed[p]) x.col(p).setConstant(std::numeric_limits<double>::quiet_NaN());
  out.terminal = std::move(x);
  return out;
}

}  // namespace sbridge
