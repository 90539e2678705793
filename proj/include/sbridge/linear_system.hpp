#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sbridge/common.hpp"

namespace sbridge {

/// Linear time-varying dynamics dx = (A(t) x + B(t) u) dt + sqrt(2 eps) B(t) dw
/// on the horizon [0,1]. A and B are matrix-valued functions of time; epsilon
/// is the process-noise strength.
struct LinearSystem {
  int n = 0;
  int m = 0;
  std::function<Matrix(double)> A;
  std::function<Matrix(double)> B;
  double epsilon = 0.0;
  std::string name = "custom";

  Matrix A_at(double t) const {
    Matrix a = A(t);
    if (a.rows() != n || a.cols() != n || !a.allFinite()) {
      throw IntegrationError("A(" + std::to_string(t) + ") is not a finite " +
                             std::to_string(n) + "x" + std::to_string(n) + " matrix");
    }
    return a;
  }

  Matrix B_at(double t) const {
    Matrix b = B(t);
    if (b.rows() != n || b.cols() != m || !b.allFinite()) {
      throw IntegrationError("B(" + std::to_string(t) + ") is not a finite " +
                             std::to_string(n) + "x" + std::to_string(m) + " matrix");
    }
    return b;
  }
};

inline LinearSystem make_constant_system(Matrix a, Matrix b, double epsilon,
                                         std::string name = "custom") {
  if (a.rows() != a.cols()) throw DimensionError("A must be square");
  if (b.rows() != a.rows()) throw DimensionError("B row count must match A");
  if (a.rows() < 1 || b.cols() < 1) throw DomainError("state and input dimensions must be positive");
  if (!a.allFinite() || !b.allFinite()) throw DomainError("A, B must be finite");
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  LinearSystem sys;
  sys.n = static_cast<int>(a.rows());
  sys.m = static_cast<int>(b.cols());
  sys.A = [a](double) { return a; };
  sys.B = [b](double) { return b; };
  sys.epsilon = epsilon;
  sys.name = std::move(name);
  return sys;
}

/// A(t) = 0, B(t) = I: scaled Wiener dynamics, the classical setting.
inline LinearSystem make_brownian(int n, double epsilon) {
  return make_constant_system(Matrix::Zero(n, n), Matrix::Identity(n, n), epsilon, "brownian");
}

/// Noisy double integrator: dx1 = x2 dt, dx2 = u dt + sqrt(2 eps) dw.
inline LinearSystem make_double_integrator(double epsilon) {
  Matrix a(2, 2), b(2, 1);
  a << 0, 1, 0, 0;
  b << 0, 1;
  return make_constant_system(a, b, epsilon, "double_integrator");
}

/// Oscillator with time-varying stiffness, forced through the velocity channel.
inline LinearSystem make_damped_oscillator_tv(double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  LinearSystem sys;
  sys.n = 2;
  sys.m = 1;
  sys.A = [](double t) {
    Matrix a(2, 2);
    a << 0.0, 1.0, -(1.0 + 0.5 * std::sin(2.0 * M_PI * t)), -0.3;
    return a;
  };
  sys.B = [](double) {
    Matrix b(2, 1);
    b << 0.0, 1.0;
    return b;
  };
  sys.epsilon = epsilon;
  sys.name = "damped_oscillator_tv";
  return sys;
}

/// Driftless plane with a single input channel that rotates over the horizon.
inline LinearSystem make_rotating_actuation(double epsilon) {
  if (!(epsilon > 0.0)) throw DomainError("epsilon must be positive");
  LinearSystem sys;
  sys.n = 2;
  sys.m = 1;
  sys.A = [](double) { return Matrix::Zero(2, 2); };
  sys.B = [](double t) {
    Matrix b(2, 1);
    b << std::cos(0.5 * M_PI * t), std::sin(0.5 * M_PI * t);
    return b;
  };
  sys.epsilon = epsilon;
  sys.name = "rotating_actuation";
  return sys;
}

inline std::vector<std::string> registry_names() {
  return {"brownian", "double_integrator", "damped_oscillator_tv", "rotating_actuation"};
}

/// Builds a registry system by name. `dim` only affects "brownian".
inline LinearSystem system_from_registry(const std::string& name, double epsilon, int dim = 2) {
  if (name == "brownian") return make_brownian(dim, epsilon);
  if (name == "double_integrator") return make_double_integrator(epsilon);
  if (name == "damped_oscillator_tv") return make_damped_oscillator_tv(epsilon);
  if (name == "rotating_actuation") return make_rotating_actuation(epsilon);
  throw DomainError("unknown system registry name: " + name);
}

}  // namespace sbridge
