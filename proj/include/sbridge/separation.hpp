#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sbridge/common.hpp"
#include "sbridge/convex_support.hpp"
#include "sbridge/gramian.hpp"

namespace sbridge {

/// One extremal-separation query: squared value, attaining point pair, and
/// the unit direction realizing it through the support functions.
struct SeparationResult {
  double value2 = 0.0;
  Vector p0, p1;
  Vector direction;
  bool certified = true;
};

/// Extremal squared separations between two (possibly transformed) supports,
/// with witnesses. When produced by linear_separations the witnesses live in
/// the transformed coordinates.
struct SeparationPair {
  double alpha_tilde = 0.0;
  double beta_tilde = 0.0;
  Vector witness_max_0, witness_max_1;
  Vector witness_min_0, witness_min_1;
  Vector direction_max, direction_min;
  bool max_certified = true;
  bool overlap = false;
};

namespace detail {

struct DiffPoint {
  Vector d;       // p0 - p1, a point of the Minkowski difference
  Vector p0, p1;  // provenance in the two sets
};

inline DiffPoint diff_support(const ConvexSupport& a, const ConvexSupport& b, const Vector& y) {
  DiffPoint s;
  s.p0 = support_point(a, y);
  s.p1 = support_point(b, -y);
  s.d = s.p0 - s.p1;
  return s;
}

struct SimplexClosest {
  Vector v;                      // closest point of conv(simplex) to the origin
  std::vector<DiffPoint> face;   // minimal face attaining it
  Vector lambda;                 // convex coefficients over that face
};

// Closest point to the origin over the convex hull of <= n+1 points, by
// enumerating faces in order of increasing vertex count and solving the
// equality-constrained least-norm system on each.
inline SimplexClosest closest_on_simplex(const std::vector<DiffPoint>& w) {
  const int k = static_cast<int>(w.size());
  SimplexClosest best;
  double best_norm2 = std::numeric_limits<double>::infinity();
  std::vector<int> idx;
  for (int size = 1; size <= k; ++size) {
    for (int mask = 1; mask < (1 << k); ++mask) {
      if (__builtin_popcount(static_cast<unsigned>(mask)) != size) continue;
      idx.clear();
      for (int i = 0; i < k; ++i)
        if (mask & (1 << i)) idx.push_back(i);
      const int m = size;
      Matrix p(w[0].d.size(), m);
      for (int i = 0; i < m; ++i) p.col(i) = w[idx[i]].d;
      // minimize |P lambda|^2 subject to sum lambda = 1
      Matrix kkt = Matrix::Zero(m + 1, m + 1);
      kkt.topLeftCorner(m, m) = 2.0 * (p.transpose() * p);
      kkt.topRightCorner(m, 1).setOnes();
      kkt.bottomLeftCorner(1, m).setOnes();
      Vector rhs = Vector::Zero(m + 1);
      rhs(m) = 1.0;
      Eigen::FullPivLU<Matrix> lu(kkt);
      if (!lu.isInvertible()) continue;
      Vector sol = lu.solve(rhs);
      Vector lam = sol.head(m);
      if ((lam.array() < -1e-12).any()) continue;
      lam = lam.cwiseMax(0.0);
      const double lsum = lam.sum();
      if (!(lsum > 0.0)) continue;
      lam /= lsum;
      const Vector v = p * lam;
      const double n2 = v.squaredNorm();
      if (n2 < best_norm2) {  // size-ordered masks keep the smallest tie face
        best_norm2 = n2;
        best.v = v;
        best.lambda = lam;
        best.face.clear();
        for (int i : idx) best.face.push_back(w[i]);
      }
    }
  }
  return best;
}

}  // namespace detail

/// Squared distance between two supports via GJK on the Minkowski difference,
/// using only their support oracles. Reports a coincidence witness when the
/// sets overlap. Throws ConvergenceError if the iteration cap is exhausted.
inline SeparationResult gjk_min_separation(const ConvexSupport& a, const ConvexSupport& b) {
  require_dim(b.dim, a.dim, "min_separation: second set dimension");
  const int n = a.dim;
  const int cap = 10 * n * 64;

  Vector y0 = center_of(a) - center_of(b);
  if (y0.norm() < 1e-300) y0 = Vector::Unit(n, 0);
  std::vector<detail::DiffPoint> w{detail::diff_support(a, b, y0)};
  double lb_best = 0.0;
  double scale = std::max(1.0, w[0].d.norm());

  for (int iter = 0; iter < cap; ++iter) {
    detail::SimplexClosest cur = detail::closest_on_simplex(w);
    const double ub2 = cur.v.squaredNorm();

    SeparationResult out;
    out.p0 = Vector::Zero(n);
    out.p1 = Vector::Zero(n);
    for (int i = 0; i < static_cast<int>(cur.face.size()); ++i) {
      out.p0 += cur.lambda(i) * cur.face[i].p0;
      out.p1 += cur.lambda(i) * cur.face[i].p1;
    }

    if (ub2 <= 1e-24 * scale * scale) {  // origin inside the hull: sets meet
      out.value2 = 0.0;
      out.direction = Vector::Zero(n);
      return out;
    }

    const detail::DiffPoint s = detail::diff_support(a, b, -cur.v);
    const double ub = std::sqrt(ub2);
    lb_best = std::max(lb_best, cur.v.dot(s.d) / ub);
    const double lb = std::max(0.0, lb_best);
    if (ub2 - lb * lb <= 1e-12 * std::max(1.0, ub2)) {
      out.value2 = ub2;
      out.direction = cur.v / ub;
      return out;
    }

    bool stalled = false;
    for (const auto& e : w) {
      if ((e.d - s.d).norm() <= 1e-13 * scale) {
        stalled = true;
        break;
      }
    }
    if (stalled) {  // support oracle cannot improve the simplex further
      out.value2 = ub2;
      out.direction = cur.v / ub;
      return out;
    }

    w = std::move(cur.face);
    w.push_back(s);
    scale = std::max(scale, s.d.norm());
    if (static_cast<int>(w.size()) > n + 1) w.erase(w.begin());
  }
  throw ConvergenceError("minimum-separation iteration cap reached; best squared bound " +
                         std::to_string(lb_best * lb_best));
}

namespace detail {

// y <- normalize(p0(y) - p1(-y)) fixed-point ascent; the witness-pair norm is
// monotone nondecreasing along the iteration.
inline void polish_max_direction(const ConvexSupport& a, const ConvexSupport& b, Vector y,
                                 SeparationResult& best) {
  for (int it = 0; it < 200; ++it) {
    const Vector p0 = support_point(a, y);
    const Vector p1 = support_point(b, -y);
    const Vector d = p0 - p1;
    const double norm2 = d.squaredNorm();
    if (norm2 > best.value2) {
      best.value2 = norm2;
      best.p0 = p0;
      best.p1 = p1;
      best.direction = d / std::sqrt(norm2);
    }
    const double dn = std::sqrt(norm2);
    if (dn < 1e-300) return;
    Vector next = d / dn;
    if ((next - y).norm() < 1e-15) return;
    y = std::move(next);
  }
}

}  // namespace detail

/// Maximal squared separation max over unit y of {h_a(y) + h_b(-y)}^2 — the
/// farthest point pair of the two sets. Exact vertex enumeration when both
/// sets are vertex lists; dense angular scan plus golden-section refinement
/// in the plane; multi-start support ascent (flagged uncertified) otherwise.
inline SeparationResult max_separation(const ConvexSupport& a, const ConvexSupport& b) {
  require_dim(b.dim, a.dim, "max_separation: second set dimension");
  const int n = a.dim;
  SeparationResult best;
  best.value2 = -1.0;
  best.p0 = Vector::Zero(n);
  best.p1 = Vector::Zero(n);
  best.direction = Vector::Zero(n);

  if (is_polyhedral(a) && is_polyhedral(b)) {
    const Matrix& va = vertices(a);
    const Matrix& vb = vertices(b);
    for (Eigen::Index i = 0; i < va.cols(); ++i) {
      for (Eigen::Index j = 0; j < vb.cols(); ++j) {
        const double d2 = (va.col(i) - vb.col(j)).squaredNorm();
        if (d2 > best.value2) {
          best.value2 = d2;
          best.p0 = va.col(i);
          best.p1 = vb.col(j);
        }
      }
    }
    const double dn = std::sqrt(best.value2);
    best.direction = dn > 0.0 ? Vector((best.p0 - best.p1) / dn) : Vector::Zero(n);
    return best;
  }

  best.value2 = 0.0;
  if (n == 1) {
    for (double s : {1.0, -1.0}) {
      Vector y(1);
      y << s;
      detail::polish_max_direction(a, b, y, best);
    }
    return best;
  }

  if (n == 2) {
    auto f = [&](double th) {
      Vector y(2);
      y << std::cos(th), std::sin(th);
      return support_function(a, y) + support_function(b, -y);
    };
    const int kAngles = 4096;
    const double step = 2.0 * M_PI / kAngles;
    int best_k = 0;
    double best_f = -std::numeric_limits<double>::infinity();
    for (int k = 0; k < kAngles; ++k) {
      const double v = f(k * step);
      if (v > best_f) {
        best_f = v;
        best_k = k;
      }
    }
    double lo = (best_k - 1) * step, hi = (best_k + 1) * step;
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
    double f1 = f(x1), f2 = f(x2);
    for (int it = 0; it < 90; ++it) {
      if (f1 < f2) {
        lo = x1;
        x1 = x2;
        f1 = f2;
        x2 = lo + gr * (hi - lo);
        f2 = f(x2);
      } else {
        hi = x2;
        x2 = x1;
        f2 = f1;
        x1 = hi - gr * (hi - lo);
        f1 = f(x1);
      }
    }
    const double th = 0.5 * (lo + hi);
    for (double cand : {th, best_k * step}) {
      Vector y(2);
      y << std::cos(cand), std::sin(cand);
      detail::polish_max_direction(a, b, y, best);
    }
    return best;
  }

  // n >= 3: multi-start ascent; global max not certified for smooth sets.
  best.certified = false;
  std::mt19937_64 rng(0xC0FFEEULL);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> seeds;
  for (int i = 0; i < n; ++i) {
    seeds.push_back(Vector::Unit(n, i));
    seeds.push_back(-Vector::Unit(n, i));
  }
  while (static_cast<int>(seeds.size()) < 64) {
    Vector y(n);
    for (int i = 0; i < n; ++i) y(i) = gauss(rng);
    const double nn = y.norm();
    if (nn < 1e-12) continue;
    seeds.push_back(y / nn);
  }
  for (const auto& y : seeds) detail::polish_max_direction(a, b, y, best);
  return best;
}

/// Minimal squared separation. Two point clouds use exact pairwise
/// enumeration (finite-set reading); any other combination goes through GJK
/// on the convex bodies.
inline SeparationResult min_separation(const ConvexSupport& a, const ConvexSupport& b) {
  require_dim(b.dim, a.dim, "min_separation: second set dimension");
  const int n = a.dim;
  if (std::holds_alternative<PointCloud>(a.body) && std::holds_alternative<PointCloud>(b.body)) {
    const Matrix& pa = vertices(a);
    const Matrix& pb = vertices(b);
    SeparationResult best;
    best.value2 = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < pa.cols(); ++i) {
      for (Eigen::Index j = 0; j < pb.cols(); ++j) {
        const double d2 = (pa.col(i) - pb.col(j)).squaredNorm();
        if (d2 < best.value2) {
          best.value2 = d2;
          best.p0 = pa.col(i);
          best.p1 = pb.col(j);
        }
      }
    }
    const double dn = std::sqrt(best.value2);
    best.direction = dn > 0.0 ? Vector((best.p0 - best.p1) / dn) : Vector::Zero(n);
    return best;
  }
  return gjk_min_separation(a, b);
}

/// Membership test with tolerance; point clouds are read as finite sets,
/// polytopes as their hulls.
inline bool contains(const ConvexSupport& s, const Vector& x, double tol = 1e-9) {
  require_dim(x.size(), s.dim, "contains: point");
  if (const auto* e = std::get_if<Ellipsoid>(&s.body)) {
    const Vector r = x - e->c;
    return r.dot(e->S.llt().solve(r)) <= 1.0 + tol;
  }
  if (const auto* b = std::get_if<Ball>(&s.body)) {
    return (x - b->c).norm() <= b->r + tol;
  }
  if (std::holds_alternative<PointCloud>(s.body)) {
    const Matrix& p = vertices(s);
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < p.cols(); ++i) best = std::min(best, (p.col(i) - x).norm());
    return best <= tol;
  }
  const auto r = gjk_min_separation(s, make_point(x));
  return std::sqrt(r.value2) <= tol;
}

inline SeparationPair make_separation_pair(const SeparationResult& mx, const SeparationResult& mn) {
  SeparationPair out;
  out.alpha_tilde = mx.value2;
  out.beta_tilde = std::min(mn.value2, mx.value2);
  out.witness_max_0 = mx.p0;
  out.witness_max_1 = mx.p1;
  out.witness_min_0 = mn.p0;
  out.witness_min_1 = mn.p1;
  out.direction_max = mx.direction;
  out.direction_min = mn.direction;
  out.max_certified = mx.certified;
  out.overlap = mn.value2 <= 0.0;
  return out;
}

/// Separations of the sets themselves (identity transform).
inline SeparationPair classical_separations(const ConvexSupport& a, const ConvexSupport& b) {
  return make_separation_pair(max_separation(a, b), min_separation(a, b));
}

/// Separations between M^{-1/2} Phi . set0 and M^{-1/2} . set1; equals the
/// extrema of the transfer quadratic form (Phi x0 - x1)^T M^{-1} (Phi x0 - x1)
/// over the product of the original sets. Witnesses are in transformed space.
inline SeparationPair linear_separations(const GramianBundle& g, const ConvexSupport& a,
                                         const ConvexSupport& b) {
  require_dim(a.dim, g.dim(), "linear_separations: set0 dimension");
  require_dim(b.dim, g.dim(), "linear_separations: set1 dimension");
  const Vector zero = Vector::Zero(g.dim());
  const ConvexSupport ta = affine_image(a, g.M_inv_sqrt * g.Phi, zero);
  const ConvexSupport tb = affine_image(b, g.M_inv_sqrt, zero);
  return classical_separations(ta, tb);
}

}  // namespace sbridge
