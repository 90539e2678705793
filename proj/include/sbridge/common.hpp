#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sbridge {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Operands whose dimensions do not match.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Non-finite values produced while integrating an ODE.
class IntegrationError : public Error {
 public:
  using Error::Error;
};

// Gramian failed the positive-definiteness test (assumption of a
// controllable pair violated on the requested interval).
class UncontrollableError : public Error {
 public:
  using Error::Error;
};

// Iterative routine exhausted its iteration budget.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid geometric construction (e.g. singular map of an ellipsoid).
class GeometryError : public Error {
 public:
  using Error::Error;
};

// Support too thin to sample by rejection.
class DegenerateSupportError : public Error {
 public:
  using Error::Error;
};

// Query point outside the region where a density/factor is representable.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

inline void require_dim(Eigen::Index got, Eigen::Index want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": dimension " + std::to_string(got) +
                         ", expected " + std::to_string(want));
  }
}

inline bool all_finite(const Matrix& m) { return m.allFinite(); }

// log(sum_i exp(v_i)) with the usual max shift; -inf input entries are fine.
inline double log_sum_exp(const Eigen::Ref<const Vector>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;  // all -inf, or a nan propagates
  return m + std::log((v.array() - m).exp().sum());
}

constexpr double kSpdRtol = 1e-10;
constexpr int kDefaultOdeSteps = 1000;
constexpr int kDefaultGramianSteps = 1000;

}  // namespace sbridge
