#pragma once

#include <Eigen/Eigenvalues>
#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include "sbridge/common.hpp"

namespace sbridge {

/// {x : (x-c)^T S^{-1} (x-c) <= 1} with S symmetric positive definite.
struct Ellipsoid {
  Vector c;
  Matrix S;
};

struct Ball {
  Vector c;
  double r = 1.0;
};

/// Convex hull of a finite vertex list (columns).
struct Polytope {
  Matrix V;
};

/// Finite point set (columns); its support function is that of the hull.
struct PointCloud {
  Matrix P;
};

struct ConvexSupport {
  std::variant<Ellipsoid, Ball, Polytope, PointCloud> body;
  int dim = 0;
};

inline ConvexSupport make_ellipsoid(Vector c, Matrix S) {
  if (S.rows() != S.cols() || S.rows() != c.size()) throw DimensionError("ellipsoid: center/shape dimensions disagree");
  if (!c.allFinite() || !S.allFinite()) throw DomainError("ellipsoid: non-finite data");
  if ((S - S.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, S.cwiseAbs().maxCoeff()))
    throw DomainError("ellipsoid: shape matrix must be symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> es(S);
  if (es.eigenvalues()(0) <= kSpdRtol * std::max(es.eigenvalues().maxCoeff(), 0.0) ||
      es.eigenvalues()(0) <= 0.0)
    throw DomainError("ellipsoid: shape matrix must be positive definite");
  const int n = static_cast<int>(c.size());
  return {Ellipsoid{std::move(c), std::move(S)}, n};
}

inline ConvexSupport make_ball(Vector c, double r) {
  if (!c.allFinite() || !std::isfinite(r)) throw DomainError("ball: non-finite data");
  if (!(r > 0.0)) throw DomainError("ball: radius must be positive");
  const int n = static_cast<int>(c.size());
  return {Ball{std::move(c), r}, n};
}

inline ConvexSupport make_polytope(Matrix vertices) {
  if (vertices.cols() < 1) throw DomainError("polytope: need at least one vertex");
  if (!vertices.allFinite()) throw DomainError("polytope: non-finite vertex");
  const int n = static_cast<int>(vertices.rows());
  return {Polytope{std::move(vertices)}, n};
}

inline ConvexSupport make_point_cloud(Matrix points) {
  if (points.cols() < 1) throw DomainError("point cloud: need at least one point");
  if (!points.allFinite()) throw DomainError("point cloud: non-finite point");
  const int n = static_cast<int>(points.rows());
  return {PointCloud{std::move(points)}, n};
}

inline ConvexSupport make_point(Vector p) {
  Matrix m(p.size(), 1);
  m.col(0) = p;
  return make_point_cloud(std::move(m));
}

inline bool is_polyhedral(const ConvexSupport& s) {
  return std::holds_alternative<Polytope>(s.body) || std::holds_alternative<PointCloud>(s.body);
}

inline const Matrix& vertices(const ConvexSupport& s) {
  if (const auto* p = std::get_if<Polytope>(&s.body)) return p->V;
  if (const auto* p = std::get_if<PointCloud>(&s.body)) return p->P;
  throw GeometryError("vertices: set has no finite vertex representation");
}

/// h_K(y) = sup_{x in K} <y, x>.
inline double support_function(const ConvexSupport& s, const Vector& y) {
  require_dim(y.size(), s.dim, "support_function: direction");
  if (!y.allFinite()) throw DomainError("support_function: non-finite direction");
  if (const auto* e = std::get_if<Ellipsoid>(&s.body)) {
    return e->c.dot(y) + std::sqrt(std::max(0.0, y.dot(e->S * y)));
  }
  if (const auto* b = std::get_if<Ball>(&s.body)) {
    return b->c.dot(y) + b->r * y.norm();
  }
  return (vertices(s).transpose() * y).maxCoeff();
}

/// A maximizer of <y, x> over the set. Ties in vertex lists break toward the
/// lowest column index; y = 0 returns the center / first vertex.
inline Vector support_point(const ConvexSupport& s, const Vector& y) {
  require_dim(y.size(), s.dim, "support_point: direction");
  if (const auto* e = std::get_if<Ellipsoid>(&s.body)) {
    const double q = std::sqrt(std::max(0.0, y.dot(e->S * y)));
    if (q <= 0.0) return e->c;
    return e->c + (e->S * y) / q;
  }
  if (const auto* b = std::get_if<Ball>(&s.body)) {
    const double ny = y.norm();
    if (ny <= 0.0) return b->c;
    return b->c + (b->r / ny) * y;
  }
  const Matrix& v = vertices(s);
  Eigen::Index best = 0;
  (v.transpose() * y).maxCoeff(&best);
  return v.col(best);
}

/// Representation of T * set + tau. Ellipsoids and balls require invertible T
/// (the image must stay a solid ellipsoid); vertex sets map through any T.
inline ConvexSupport affine_image(const ConvexSupport& s, const Matrix& T, const Vector& tau) {
  require_dim(T.cols(), s.dim, "affine_image: map columns");
  require_dim(tau.size(), T.rows(), "affine_image: translation");
  if (!T.allFinite() || !tau.allFinite()) throw DomainError("affine_image: non-finite map");

  const bool needs_inverse =
      std::holds_alternative<Ellipsoid>(s.body) || std::holds_alternative<Ball>(s.body);
  if (needs_inverse) {
    if (T.rows() != T.cols()) {
      throw GeometryError("affine_image: non-square map of an ellipsoidal set; sample its boundary into a point cloud instead");
    }
    Eigen::FullPivLU<Matrix> lu(T);
    if (!lu.isInvertible()) {
      throw GeometryError("affine_image: singular map of an ellipsoidal set; sample its boundary into a point cloud instead");
    }
  }

  if (const auto* e = std::get_if<Ellipsoid>(&s.body)) {
    return make_ellipsoid(T * e->c + tau, T * e->S * T.transpose());
  }
  if (const auto* b = std::get_if<Ball>(&s.body)) {
    // Detect similarity maps so balls stay balls; anything else becomes an ellipsoid.
    const Matrix tt = T * T.transpose();
    const double scale2 = tt.trace() / T.rows();
    if ((tt - scale2 * Matrix::Identity(T.rows(), T.rows())).cwiseAbs().maxCoeff() <
        1e-12 * std::max(1.0, scale2)) {
      return make_ball(T * b->c + tau, b->r * std::sqrt(scale2));
    }
    return make_ellipsoid(T * b->c + tau, (b->r * b->r) * tt);
  }
  const Matrix& v = vertices(s);
  Matrix out = (T * v).colwise() + tau;
  if (std::holds_alternative<Polytope>(s.body)) return make_polytope(std::move(out));
  return make_point_cloud(std::move(out));
}

/// Axis-aligned box [lo, hi] enclosing the set, from support evaluations.
inline std::pair<Vector, Vector> bounding_box(const ConvexSupport& s) {
  Vector lo(s.dim), hi(s.dim);
  Vector e = Vector::Zero(s.dim);
  for (int i = 0; i < s.dim; ++i) {
    e(i) = 1.0;
    hi(i) = support_function(s, e);
    e(i) = -1.0;
    lo(i) = -support_function(s, e);
    e(i) = 0.0;
  }
  return {lo, hi};
}

/// Geometric center used by the preconditioning step: exact center for
/// ellipsoids/balls, vertex centroid otherwise.
inline Vector center_of(const ConvexSupport& s) {
  if (const auto* e = std::get_if<Ellipsoid>(&s.body)) return e->c;
  if (const auto* b = std::get_if<Ball>(&s.body)) return b->c;
  return vertices(s).rowwise().mean();
}

inline std::string variant_name(const ConvexSupport& s) {
  if (std::holds_alternative<Ellipsoid>(s.body)) return "ellipsoid";
  if (std::holds_alternative<Ball>(s.body)) return "ball";
  if (std::holds_alternative<Polytope>(s.body)) return "polytope";
  return "pointcloud";
}

}  // namespace sbridge
