#pragma once

#include <cmath>
#include <optional>
#include <utility>

#include "sbridge/common.hpp"
#include "sbridge/contraction.hpp"
#include "sbridge/convex_support.hpp"
#include "sbridge/discrete_measure.hpp"
#include "sbridge/gramian.hpp"

namespace sbridge {

/// x -> T x + shift
struct AffineMap {
  Matrix T;
  Vector shift;

  Vector apply(const Vector& x) const { return T * x + shift; }
  ConvexSupport apply(const ConvexSupport& s) const { return affine_image(s, T, shift); }
};

/// Outcome of whitening both supports and recentering their means. The
/// translation step only happens when the pushforward covariances are
/// identical and diagonal; otherwise the record carries the whitened sets,
/// the before-coefficient, and applicable=false.
struct PreconditionRecord {
  AffineMap map0, map1;
  ConvexSupport set0_out, set1_out;
  ContractionReport gamma_before;
  std::optional<ContractionReport> gamma_after;
  Matrix pushforward_cov0, pushforward_cov1;
  bool applicable = false;
};

namespace detail {

inline bool identical_and_diagonal(const Matrix& a, const Matrix& b, double rtol) {
  const double scale = std::max({1e-300, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
  if ((a - b).cwiseAbs().maxCoeff() > rtol * scale) return false;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (i != j && (std::abs(a(i, j)) > rtol * scale || std::abs(b(i, j)) > rtol * scale))
        return false;
  return true;
}

}  // namespace detail

/// Whitens set0 through M^{-1/2} Phi and set1 through M^{-1/2}, then — when
/// the pushforward covariances (T cov T^T) are identical and diagonal —
/// translates both transformed means to the origin. Means and covariances
/// are first moments of the underlying measures in original coordinates.
/// The contraction coefficients before and after are those of the whitened
/// problem, where the kernel is the heat kernel.
inline PreconditionRecord precondition_supports(const GramianBundle& g, double epsilon,
                                                const ConvexSupport& set0,
                                                const ConvexSupport& set1, const Vector& mean0,
                                                const Vector& mean1, const Matrix& cov0,
                                                const Matrix& cov1, int separation_power = 2,
                                                double cov_rtol = 1e-9) {
  require_dim(set0.dim, g.dim(), "precondition: set0 dimension");
  require_dim(set1.dim, g.dim(), "precondition: set1 dimension");
  require_dim(mean0.size(), g.dim(), "precondition: mean0");
  require_dim(mean1.size(), g.dim(), "precondition: mean1");
  require_dim(cov0.rows(), g.dim(), "precondition: cov0");
  require_dim(cov1.rows(), g.dim(), "precondition: cov1");

  PreconditionRecord rec;
  const Matrix t0 = g.M_inv_sqrt * g.Phi;
  const Matrix t1 = g.M_inv_sqrt;
  rec.map0 = {t0, Vector::Zero(g.dim())};
  rec.map1 = {t1, Vector::Zero(g.dim())};
  rec.set0_out = rec.map0.apply(set0);
  rec.set1_out = rec.map1.apply(set1);
  rec.gamma_before = gamma_classical(epsilon, rec.set0_out, rec.set1_out, separation_power);

  rec.pushforward_cov0 = t0 * cov0 * t0.transpose();
  rec.pushforward_cov1 = t1 * cov1 * t1.transpose();
  rec.applicable =
      detail::identical_and_diagonal(rec.pushforward_cov0, rec.pushforward_cov1, cov_rtol);
  if (!rec.applicable) return rec;

  rec.map0.shift = -(t0 * mean0);
  rec.map1.shift = -(t1 * mean1);
  rec.set0_out = rec.map0.apply(set0);
  rec.set1_out = rec.map1.apply(set1);
  rec.gamma_after = gamma_classical(epsilon, rec.set0_out, rec.set1_out, separation_power);
  return rec;
}

/// Measure-driven form: moments and supports read off the discrete data.
inline PreconditionRecord precondition_measures(const GramianBundle& g, double epsilon,
                                                const DiscreteMeasure& mu0,
                                                const DiscreteMeasure& mu1,
                                                int separation_power = 2,
                                                double cov_rtol = 1e-9) {
  return precondition_supports(g, epsilon, mu0.support, mu1.support, measure_mean(mu0),
                               measure_mean(mu1), measure_covariance(mu0),
                               measure_covariance(mu1), separation_power, cov_rtol);
}

/// Ordered before/after comparison of an applicable record.
struct GammaComparison {
  double gamma_before = 0.0;
  double gamma_after = 0.0;
  double improvement = 1.0;  // before / after
  bool improved = false;     // strictly smaller after
};

inline GammaComparison compare_gamma(const PreconditionRecord& rec) {
  if (!rec.applicable || !rec.gamma_after)
    throw DomainError(
        "compare_gamma: record is not applicable (pushforward covariances are not identical "
        "and diagonal), no after-coefficient exists");
  GammaComparison out;
  out.gamma_before = rec.gamma_before.gamma;
  out.gamma_after = rec.gamma_after->gamma;
  out.improvement = out.gamma_after > 0.0 ? out.gamma_before / out.gamma_after
                    : out.gamma_before == 0.0 ? 1.0
                                              : std::numeric_limits<double>::infinity();
  out.improved = out.gamma_after < out.gamma_before;
  return out;
}

}  // namespace sbridge
