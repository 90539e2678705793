#pragma once

#include <cmath>
#include <random>
#include <string>
#include <utility>

#include "sbridge/common.hpp"
#include "sbridge/convex_support.hpp"
#include "sbridge/separation.hpp"

namespace sbridge {

/// Named boundary-density specification evaluated on sampled points.
struct DensitySpec {
  std::string kind = "uniform";  // uniform | gaussian (truncated to the support)
  Vector mean;                   // gaussian only
  Matrix cov;                    // gaussian only, SPD
};

inline DensitySpec uniform_density() { return {}; }

inline DensitySpec gaussian_density(Vector mean, Matrix cov) {
  DensitySpec d;
  d.kind = "gaussian";
  d.mean = std::move(mean);
  d.cov = std::move(cov);
  return d;
}

/// Quadrature discretization of a probability density on a compact support:
/// atoms x_i, positive weights w_i, and density values rho_i with
/// sum_i w_i rho_i = 1.
struct DiscreteMeasure {
  Matrix points;     // n x k, columns are atoms
  Vector weights;    // k, positive
  Vector densities;  // k, strictly positive after normalization
  ConvexSupport support;

  int dim() const { return static_cast<int>(points.rows()); }
  int size() const { return static_cast<int>(points.cols()); }
  /// Atom masses w_i rho_i; these sum to one.
  Vector masses() const { return weights.cwiseProduct(densities); }
};

inline void validate_measure(const DiscreteMeasure& m, double membership_tol = 1e-9) {
  if (m.points.cols() < 1) throw DomainError("measure: needs at least one atom");
  require_dim(m.weights.size(), m.points.cols(), "measure: weights");
  require_dim(m.densities.size(), m.points.cols(), "measure: densities");
  require_dim(m.points.rows(), m.support.dim, "measure: point dimension");
  if (!m.points.allFinite() || !m.weights.allFinite() || !m.densities.allFinite())
    throw DomainError("measure: non-finite data");
  if ((m.weights.array() <= 0.0).any()) throw DomainError("measure: weights must be positive");
  if ((m.densities.array() < 0.0).any()) throw DomainError("measure: densities must be nonnegative");
  const double mass = m.weights.dot(m.densities);
  if (std::abs(mass - 1.0) > 1e-12) throw DomainError("measure: total mass must be 1");
  for (int i = 0; i < m.size(); ++i) {
    if (!contains(m.support, m.points.col(i), membership_tol))
      throw DomainError("measure: atom " + std::to_string(i) + " lies outside the support");
  }
}

namespace detail {

inline Vector density_values(const DensitySpec& spec, const Matrix& points) {
  const int k = static_cast<int>(points.cols());
  if (spec.kind == "uniform") return Vector::Ones(k);
  if (spec.kind == "gaussian") {
    require_dim(spec.mean.size(), points.rows(), "gaussian density: mean");
    require_dim(spec.cov.rows(), points.rows(), "gaussian density: cov");
    Eigen::LLT<Matrix> llt(spec.cov);
    if (llt.info() != Eigen::Success) throw DomainError("gaussian density: covariance not SPD");
    Vector out(k);
    for (int i = 0; i < k; ++i) {
      const Vector r = points.col(i) - spec.mean;
      out(i) = std::exp(-0.5 * r.dot(llt.solve(r)));
    }
    return out;
  }
  throw DomainError("unknown density kind: " + spec.kind);
}

}  // namespace detail

/// Monte-Carlo quadrature of a density on a support: seeded rejection
/// sampling from the bounding box (point clouds contribute every point),
/// uniform weights, density values from the spec, normalized to unit mass.
inline DiscreteMeasure discretize_support(const ConvexSupport& set, const DensitySpec& spec,
                                          int count, std::uint64_t seed) {
  if (count < 1) throw DomainError("discretize_support: count must be >= 1");
  DiscreteMeasure m;
  m.support = set;
  if (std::holds_alternative<PointCloud>(set.body)) {
    m.points = vertices(set);
  } else {
    const auto [lo, hi] = bounding_box(set);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    m.points.resize(set.dim, count);
    const long budget = 1000L * count;
    long attempts = 0;
    int accepted = 0;
    while (accepted < count) {
      if (++attempts > budget)
        throw DegenerateSupportError("discretize_support: rejection acceptance below 0.1%");
      Vector x(set.dim);
      for (int i = 0; i < set.dim; ++i) x(i) = lo(i) + (hi(i) - lo(i)) * u(rng);
      if (contains(set, x, 0.0)) m.points.col(accepted++) = x;
    }
  }
  const int k = static_cast<int>(m.points.cols());
  m.weights = Vector::Constant(k, 1.0 / k);
  m.densities = detail::density_values(spec, m.points);
  const double mass = m.weights.dot(m.densities);
  if (!(mass > 0.0)) throw DomainError("discretize_support: density vanishes on all atoms");
  m.densities /= mass;
  validate_measure(m);
  return m;
}

/// Mean of the discrete law (atom masses w rho).
inline Vector measure_mean(const DiscreteMeasure& m) { return m.points * m.masses(); }

inline Matrix measure_covariance(const DiscreteMeasure& m) {
  const Vector mu = measure_mean(m);
  const Vector p = m.masses();
  Matrix cov = Matrix::Zero(m.dim(), m.dim());
  for (int i = 0; i < m.size(); ++i) {
    const Vector r = m.points.col(i) - mu;
    cov += p(i) * (r * r.transpose());
  }
  return cov;
}

/// Draws `count` atom indices from the law w rho (categorical sampling).
inline std::vector<int> sample_atoms(const DiscreteMeasure& m, int count, std::uint64_t seed) {
  const Vector p = m.masses();
  Vector cum(p.size());
  double acc = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    acc += p(i);
    cum(i) = acc;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<int> idx(count);
  for (int s = 0; s < count; ++s) {
    const double r = u(rng) * acc;
    int lo = 0, hi = static_cast<int>(p.size()) - 1;
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      if (cum(mid) < r)
        lo = mid + 1;
      else
        hi = mid;
    }
    idx[s] = lo;
  }
  return idx;
}

}  // namespace sbridge
