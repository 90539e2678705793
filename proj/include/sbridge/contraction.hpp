#pragma once

#include <cmath>
#include <string>

#include "sbridge/common.hpp"
#include "sbridge/convex_support.hpp"
#include "sbridge/gramian.hpp"
#include "sbridge/kernels.hpp"
#include "sbridge/linear_system.hpp"
#include "sbridge/separation.hpp"

namespace sbridge {

/// Worst-case per-pass contraction coefficient of the fixed-point recursion,
/// tanh^2((alpha_tilde - beta_tilde) / (8 epsilon)). Unclamped; saturates to
/// 1.0 in floating point for extreme separations.
inline double gamma_from_separations(double alpha_tilde, double beta_tilde, double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("gamma: epsilon must be positive");
  if (!(beta_tilde >= 0.0) || beta_tilde > alpha_tilde)
    throw DomainError("gamma: need 0 <= beta_tilde <= alpha_tilde");
  const double t = std::tanh((alpha_tilde - beta_tilde) / (8.0 * epsilon));
  return t * t;
}

/// Same coefficient from kernel bounds, tanh^2(log(beta/alpha) / 2); uses the
/// log fields so extreme ratios cannot overflow.
inline double gamma_from_kernel_bounds(const KernelBounds& b) {
  if (!(b.log_beta >= b.log_alpha)) throw DomainError("gamma: need alpha <= beta");
  double half_log_ratio;
  if (b.alpha > 0.0 && std::isfinite(b.beta) && b.beta > 0.0) {
    half_log_ratio = 0.5 * std::log(b.beta / b.alpha);
  } else {
    half_log_ratio = 0.5 * (b.log_beta - b.log_alpha);
  }
  const double t = std::tanh(half_log_ratio);
  return t * t;
}

struct QuadraticFormBounds {
  double lo = 0.0;
  double value = 0.0;
  double hi = 0.0;
};

/// The eigenvalue sandwich |r|^2 / lam_max <= r^T M^{-1} r <= |r|^2 / lam_min
/// for r = Phi x0 - x1, all three from one pass over the eigenbasis.
inline QuadraticFormBounds quadratic_form_bounds(const GramianBundle& g, const Vector& x0,
                                                 const Vector& x1) {
  const Vector r = g.Phi * x0 - x1;
  const Vector a = g.eigvecs.transpose() * r;
  double s2 = 0.0, value = 0.0;
  for (int i = 0; i < a.size(); ++i) {
    const double ai2 = a(i) * a(i);
    s2 += ai2;
    value += ai2 / g.eigvals(i);
  }
  QuadraticFormBounds out;
  out.value = value;
  out.lo = std::min(value, s2 / g.eigvals(g.dim() - 1));
  out.hi = std::max(value, s2 / g.eigvals(0));
  return out;
}

/// Everything behind a reported contraction coefficient. alpha_tilde and
/// beta_tilde are the power-adjusted values actually fed to the tanh formula
/// (power 2: the squared separations as such; power 1: their square roots);
/// `separations` always keeps the squared originals and the witnesses.
struct ContractionReport {
  double gamma = 0.0;
  double alpha_tilde = 0.0;
  double beta_tilde = 0.0;
  int separation_power = 2;
  double epsilon = 0.0;
  std::string kernel_kind = "classical";     // classical | linear
  std::string bounds_route = "separations";  // separations | kernel-ratio
  double sandwich_lo = 0.0;
  double sandwich_hi = 0.0;
  SeparationPair separations;
  bool max_certified = true;
};

namespace detail {

inline ContractionReport build_report(const SeparationPair& pair, double epsilon,
                                      int separation_power, const std::string& kernel_kind) {
  if (separation_power != 1 && separation_power != 2)
    throw DomainError("separation_power must be 1 or 2");
  ContractionReport rep;
  rep.separations = pair;
  rep.separation_power = separation_power;
  rep.epsilon = epsilon;
  rep.kernel_kind = kernel_kind;
  rep.alpha_tilde =
      separation_power == 2 ? pair.alpha_tilde : std::sqrt(std::max(0.0, pair.alpha_tilde));
  rep.beta_tilde =
      separation_power == 2 ? pair.beta_tilde : std::sqrt(std::max(0.0, pair.beta_tilde));
  rep.gamma = std::min(gamma_from_separations(rep.alpha_tilde, rep.beta_tilde, epsilon),
                       1.0 - 1e-16);  // respect the open interval under saturation
  rep.max_certified = pair.max_certified;
  return rep;
}

}  // namespace detail

/// Classical-kernel coefficient from the plain separations of the supports.
inline ContractionReport gamma_classical(double epsilon, const ConvexSupport& set0,
                                         const ConvexSupport& set1, int separation_power = 2) {
  const SeparationPair pair = classical_separations(set0, set1);
  ContractionReport rep = detail::build_report(pair, epsilon, separation_power, "classical");
  rep.sandwich_lo = rep.sandwich_hi = pair.alpha_tilde;  // unit spectrum collapses the sandwich
  return rep;
}

struct GammaOptions {
  int separation_power = 2;
  int gramian_steps = kDefaultGramianSteps;
};

/// Linear-kernel coefficient from a prebuilt Gramian bundle.
inline ContractionReport gamma_linear(const GramianBundle& g, double epsilon,
                                      const ConvexSupport& set0, const ConvexSupport& set1,
                                      int separation_power = 2) {
  const SeparationPair pair = linear_separations(g, set0, set1);
  ContractionReport rep = detail::build_report(pair, epsilon, separation_power, "linear");
  // Eigenvalue sandwich at the maximal witness, mapped back to original coordinates.
  const Vector x0 = g.Phi.fullPivLu().solve(g.M_sqrt * pair.witness_max_0);
  const Vector x1 = g.M_sqrt * pair.witness_max_1;
  const auto qb = quadratic_form_bounds(g, x0, x1);
  rep.sandwich_lo = qb.lo;
  rep.sandwich_hi = qb.hi;
  return rep;
}

/// Theorem-level entry point: builds the horizon Gramian and evaluates the
/// worst-case coefficient of the linear problem.
inline ContractionReport gamma_linear(const LinearSystem& sys, const ConvexSupport& set0,
                                      const ConvexSupport& set1, const GammaOptions& opt = {}) {
  const GramianBundle g = controllability_gramian(sys, 0.0, 1.0, opt.gramian_steps);
  return gamma_linear(g, sys.epsilon, set0, set1, opt.separation_power);
}

}  // namespace sbridge
