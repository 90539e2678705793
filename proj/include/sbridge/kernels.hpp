#pragma once

#include <cmath>

#include "sbridge/common.hpp"
#include "sbridge/convex_support.hpp"
#include "sbridge/gramian.hpp"
#include "sbridge/separation.hpp"

namespace sbridge {

/// log of the scaled heat kernel (4 pi eps)^{-n/2} exp(-|x0-x1|^2 / (4 eps)).
inline double log_brownian_kernel(double epsilon, const Vector& x0, const Vector& x1) {
  if (!(epsilon > 0.0)) throw DomainError("kernel: epsilon must be positive");
  require_dim(x1.size(), x0.size(), "kernel: x1");
  const double n = static_cast<double>(x0.size());
  return -0.5 * n * std::log(4.0 * M_PI * epsilon) - (x0 - x1).squaredNorm() / (4.0 * epsilon);
}

inline double brownian_kernel(double epsilon, const Vector& x0, const Vector& x1) {
  return std::exp(log_brownian_kernel(epsilon, x0, x1));
}

/// log transition density of the uncontrolled linear diffusion over the
/// bundle's interval: Gaussian in x1 with mean Phi x0 and covariance 2 eps M.
inline double log_linear_kernel(const GramianBundle& g, double epsilon, const Vector& x0,
                                const Vector& x1) {
  if (!(epsilon > 0.0)) throw DomainError("kernel: epsilon must be positive");
  require_dim(x0.size(), g.dim(), "kernel: x0");
  require_dim(x1.size(), g.dim(), "kernel: x1");
  const double n = static_cast<double>(g.dim());
  const double quad = min_energy_transfer_cost(g, x0, x1);
  return -0.5 * (n * std::log(4.0 * M_PI * epsilon) + g.log_det_M) - quad / (4.0 * epsilon);
}

/// Same density through the whitened factorization
/// det(M)^{-1/2} q_B(M^{-1/2} Phi x0, M^{-1/2} x1); kept as a cross-check route.
inline double log_linear_kernel_factored(const GramianBundle& g, double epsilon, const Vector& x0,
                                         const Vector& x1) {
  if (!(epsilon > 0.0)) throw DomainError("kernel: epsilon must be positive");
  return -0.5 * g.log_det_M +
         log_brownian_kernel(epsilon, g.M_inv_sqrt * (g.Phi * x0), g.M_inv_sqrt * x1);
}

inline double linear_kernel(const GramianBundle& g, double epsilon, const Vector& x0,
                            const Vector& x1) {
  return std::exp(log_linear_kernel(g, epsilon, x0, x1));
}

/// Extremal kernel values over a product of supports, with the exponent
/// extrema they derive from. alpha = min, beta = max.
struct KernelBounds {
  double alpha = 0.0;
  double beta = 0.0;
  double alpha_tilde = 0.0;  // squared maximal separation (smallest kernel value)
  double beta_tilde = 0.0;   // squared minimal separation (largest kernel value)
  double log_normalizer = 0.0;
  double log_alpha = 0.0;  // overflow-safe duplicates of the bounds
  double log_beta = 0.0;
};

inline KernelBounds bounds_from_separations(const SeparationPair& pair, double epsilon,
                                            double log_normalizer) {
  if (!(epsilon > 0.0)) throw DomainError("kernel_bounds: epsilon must be positive");
  KernelBounds out;
  out.alpha_tilde = pair.alpha_tilde;
  out.beta_tilde = pair.beta_tilde;
  out.log_normalizer = log_normalizer;
  out.log_alpha = log_normalizer - pair.alpha_tilde / (4.0 * epsilon);
  out.log_beta = log_normalizer - pair.beta_tilde / (4.0 * epsilon);
  out.alpha = std::exp(out.log_alpha);
  out.beta = std::exp(out.log_beta);
  return out;
}

/// Bounds of the classical kernel on set0 x set1 (Eq. of the scaled heat kernel).
inline KernelBounds kernel_bounds(double epsilon, const ConvexSupport& set0,
                                  const ConvexSupport& set1) {
  const double n = static_cast<double>(set0.dim);
  const double log_norm = -0.5 * n * std::log(4.0 * M_PI * epsilon);
  return bounds_from_separations(classical_separations(set0, set1), epsilon, log_norm);
}

/// Bounds of the linear kernel on set0 x set1 via the transformed separations.
inline KernelBounds kernel_bounds(const GramianBundle& g, double epsilon,
                                  const ConvexSupport& set0, const ConvexSupport& set1) {
  const double n = static_cast<double>(g.dim());
  const double log_norm = -0.5 * (n * std::log(4.0 * M_PI * epsilon) + g.log_det_M);
  return bounds_from_separations(linear_separations(g, set0, set1), epsilon, log_norm);
}

}  // namespace sbridge
