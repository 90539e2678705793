#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "sbridge/convex_support.hpp"
#include "sbridge/gramian.hpp"
#include "sbridge/linear_system.hpp"
#include "sbridge/separation.hpp"

using namespace sbridge;

namespace {

Vector rand_vec(int n, std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vector v(n);
  for (int i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

Matrix rand_cloud(int n, int k, std::mt19937_64& rng, double scale) {
  Matrix p(n, k);
  for (int j = 0; j < k; ++j) p.col(j) = rand_vec(n, rng, scale);
  return p;
}

Matrix rand_spd(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> lam(0.3, 2.0);
  Matrix a = rand_cloud(n, n, rng, 1.0);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  Vector d(n);
  for (int i = 0; i < n; ++i) d(i) = lam(rng);
  return q * d.asDiagonal() * q.transpose();
}

Matrix rand_invertible(int n, std::mt19937_64& rng) {
  for (;;) {
    Matrix t = rand_cloud(n, n, rng, 1.0);
    if (std::abs(t.determinant()) > 0.1) return t;
  }
}

ConvexSupport rand_support(int n, int variant, std::mt19937_64& rng) {
  switch (variant % 4) {
    case 0:
      return make_ellipsoid(rand_vec(n, rng, 3.0), rand_spd(n, rng));
    case 1:
      return make_ball(rand_vec(n, rng, 3.0), std::uniform_real_distribution<double>(0.2, 2.0)(rng));
    case 2:
      return make_polytope(rand_cloud(n, 3 + static_cast<int>(rng() % 8), rng, 3.0));
    default:
      return make_point_cloud(rand_cloud(n, 3 + static_cast<int>(rng() % 8), rng, 3.0));
  }
}

// ---- planar hull utilities for the exact polygon-distance oracle ----

using P2 = Eigen::Vector2d;

double cross2(const P2& o, const P2& a, const P2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

std::vector<P2> hull2d(const Matrix& pts) {
  std::vector<P2> p;
  for (Eigen::Index i = 0; i < pts.cols(); ++i) p.emplace_back(pts(0, i), pts(1, i));
  std::sort(p.begin(), p.end(), [](const P2& a, const P2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  p.erase(std::unique(p.begin(), p.end()), p.end());
  const int m = static_cast<int>(p.size());
  if (m <= 2) return p;
  std::vector<P2> h(2 * m);
  int k = 0;
  for (int i = 0; i < m; ++i) {  // lower
    while (k >= 2 && cross2(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (int i = m - 2, t = k + 1; i >= 0; --i) {  // upper
    while (k >= t && cross2(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;  // counter-clockwise
}

double point_seg_dist(const P2& p, const P2& a, const P2& b) {
  const P2 ab = b - a;
  const double len2 = ab.squaredNorm();
  if (len2 <= 0.0) return (p - a).norm();
  const double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
  return (p - (a + t * ab)).norm();
}

bool on_segment(const P2& p, const P2& a, const P2& b) {
  return std::min(a.x(), b.x()) - 1e-12 <= p.x() && p.x() <= std::max(a.x(), b.x()) + 1e-12 &&
         std::min(a.y(), b.y()) - 1e-12 <= p.y() && p.y() <= std::max(a.y(), b.y()) + 1e-12;
}

bool segments_intersect(const P2& p1, const P2& p2, const P2& q1, const P2& q2) {
  const double d1 = cross2(q1, q2, p1), d2 = cross2(q1, q2, p2);
  const double d3 = cross2(p1, p2, q1), d4 = cross2(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
    return true;
  if (d1 == 0 && on_segment(p1, q1, q2)) return true;
  if (d2 == 0 && on_segment(p2, q1, q2)) return true;
  if (d3 == 0 && on_segment(q1, p1, p2)) return true;
  if (d4 == 0 && on_segment(q2, p1, p2)) return true;
  return false;
}

double seg_seg_dist(const P2& a0, const P2& a1, const P2& b0, const P2& b1) {
  if (segments_intersect(a0, a1, b0, b1)) return 0.0;
  return std::min(std::min(point_seg_dist(a0, b0, b1), point_seg_dist(a1, b0, b1)),
                  std::min(point_seg_dist(b0, a0, a1), point_seg_dist(b1, a0, a1)));
}

bool point_in_hull(const std::vector<P2>& h, const P2& p) {
  if (h.size() == 1) return (p - h[0]).norm() <= 1e-12;
  if (h.size() == 2) return point_seg_dist(p, h[0], h[1]) <= 1e-12;
  for (size_t i = 0; i < h.size(); ++i) {
    if (cross2(h[i], h[(i + 1) % h.size()], p) < 0) return false;  // CCW hull
  }
  return true;
}

double polygon_distance(const std::vector<P2>& h0, const std::vector<P2>& h1) {
  for (const auto& p : h0)
    if (point_in_hull(h1, p)) return 0.0;
  for (const auto& p : h1)
    if (point_in_hull(h0, p)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const auto edges = [](const std::vector<P2>& h) {
    std::vector<std::pair<P2, P2>> e;
    if (h.size() == 1) e.emplace_back(h[0], h[0]);
    for (size_t i = 0; i + 1 < h.size(); ++i) e.emplace_back(h[i], h[i + 1]);
    if (h.size() > 2) e.emplace_back(h.back(), h.front());
    return e;
  };
  for (const auto& [a0, a1] : edges(h0))
    for (const auto& [b0, b1] : edges(h1)) best = std::min(best, seg_seg_dist(a0, a1, b0, b1));
  return best;
}

double cloud_support(const Matrix& p, const Vector& y) { return (p.transpose() * y).maxCoeff(); }

}  // namespace

TEST_CASE("support function closed forms") {
  Vector c2 = Vector::Zero(2);
  const auto ball = make_ball(c2, 1.0);
  Vector y(2);
  y << 0, 1;
  REQUIRE(support_function(ball, y) == Catch::Approx(1.0));

  Vector c(2);
  c << 0, 3;
  const auto ell = make_ellipsoid(c, Matrix::Identity(2, 2));
  Vector ym(2);
  ym << 0, -1;
  REQUIRE(support_function(ell, ym) == Catch::Approx(-2.0));

  Matrix sq(2, 4);
  sq << 1, 1, -1, -1, 1, -1, 1, -1;
  const auto poly = make_polytope(sq);
  Vector yd(2);
  yd << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  REQUIRE(support_function(poly, yd) == Catch::Approx(std::sqrt(2.0)));
}

TEST_CASE("support function is positively homogeneous and consistent with support points") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> pos(0.1, 5.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const auto s = rand_support(n, trial, rng);
    const Vector y = rand_vec(n, rng, 2.0);
    const double a = pos(rng);
    const double h = support_function(s, y);
    REQUIRE(support_function(s, a * y) == Catch::Approx(a * h).margin(1e-10));
    // the support point attains the support value
    const Vector p = support_point(s, y);
    REQUIRE(p.dot(y) == Catch::Approx(h).margin(1e-10));
  }
}

TEST_CASE("support functions add over Minkowski sums of point clouds") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 2);
    const Matrix a = rand_cloud(n, 6, rng, 3.0);
    const Matrix b = rand_cloud(n, 5, rng, 3.0);
    Matrix sum(n, a.cols() * b.cols());
    int c = 0;
    for (Eigen::Index i = 0; i < a.cols(); ++i)
      for (Eigen::Index j = 0; j < b.cols(); ++j) sum.col(c++) = a.col(i) + b.col(j);
    const auto sa = make_point_cloud(a), sb = make_point_cloud(b), ss = make_point_cloud(sum);
    const Vector y = rand_vec(n, rng, 1.0);
    REQUIRE(support_function(ss, y) ==
            Catch::Approx(support_function(sa, y) + support_function(sb, y)).margin(1e-10));
  }
}

TEST_CASE("affine images transform support functions by the adjoint rule") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const auto s = rand_support(n, trial, rng);
    const Matrix t = rand_invertible(n, rng);
    const Vector tau = rand_vec(n, rng, 2.0);
    const auto img = affine_image(s, t, tau);
    for (int k = 0; k < 10; ++k) {
      const Vector y = rand_vec(n, rng, 1.5);
      const double lhs = support_function(img, y);
      const double rhs = support_function(s, t.transpose() * y) + tau.dot(y);
      REQUIRE(lhs == Catch::Approx(rhs).margin(1e-10));
    }
  }
}

TEST_CASE("affine image special cases") {
  SECTION("identity map returns an equivalent set") {
    Vector c(2);
    c << 1, -2;
    const auto s = make_ball(c, 0.7);
    const auto img = affine_image(s, Matrix::Identity(2, 2), Vector::Zero(2));
    REQUIRE(std::holds_alternative<Ball>(img.body));
    REQUIRE(std::get<Ball>(img.body).r == Catch::Approx(0.7));
  }
  SECTION("uniform scaling plus shift keeps a ball a ball") {
    const auto s = make_ball(Vector::Zero(2), 1.0);
    Vector tau(2);
    tau << 1, 0;
    const auto img = affine_image(s, 2.0 * Matrix::Identity(2, 2), tau);
    REQUIRE(std::holds_alternative<Ball>(img.body));
    REQUIRE(std::get<Ball>(img.body).r == Catch::Approx(2.0));
    REQUIRE(std::get<Ball>(img.body).c(0) == Catch::Approx(1.0));
  }
  SECTION("shear turns a ball into an ellipsoid") {
    const auto s = make_ball(Vector::Zero(2), 1.0);
    Matrix t(2, 2);
    t << 1, 1, 0, 1;
    const auto img = affine_image(s, t, Vector::Zero(2));
    REQUIRE(std::holds_alternative<Ellipsoid>(img.body));
  }
  SECTION("singular maps of ellipsoidal sets are rejected with guidance") {
    const auto s = make_ellipsoid(Vector::Zero(2), Matrix::Identity(2, 2));
    Matrix t = Matrix::Zero(2, 2);
    t(0, 0) = 1.0;
    REQUIRE_THROWS_WITH(affine_image(s, t, Vector::Zero(2)),
                        Catch::Matchers::ContainsSubstring("point cloud"));
    std::mt19937_64 rng(7);
    const Matrix verts = rand_cloud(2, 5, rng, 1.0);
    REQUIRE_NOTHROW(affine_image(make_polytope(verts), t, Vector::Zero(2)));
  }
}

TEST_CASE("transformed supports of the double-integrator instance are unit disks") {
  const auto sys = make_double_integrator(0.5);
  const auto g = controllability_gramian(sys, 0.0, 1.0);
  Vector e0(2), e1(2);
  e0 << 0, 3;
  e1 << 3, 0;
  const Vector c0 = g.Phi.inverse() * g.M_sqrt * e0;
  const Vector c1 = g.M_sqrt * e1;
  const Matrix s0 = g.Phi.inverse() * g.M * g.Phi.inverse().transpose();
  const Matrix s1 = g.M;
  const auto x0 = make_ellipsoid(c0, s0);
  const auto x1 = make_ellipsoid(c1, s1);

  const auto t0 = affine_image(x0, g.M_inv_sqrt * g.Phi, Vector::Zero(2));
  const auto t1 = affine_image(x1, g.M_inv_sqrt, Vector::Zero(2));
  const auto disk0 = make_ball(e0, 1.0);
  const auto disk1 = make_ball(e1, 1.0);
  for (int k = 0; k < 360; ++k) {
    const double th = 2.0 * M_PI * k / 360.0;
    Vector y(2);
    y << std::cos(th), std::sin(th);
    REQUIRE(support_function(t0, y) == Catch::Approx(support_function(disk0, y)).margin(1e-8));
    REQUIRE(support_function(t1, y) == Catch::Approx(support_function(disk1, y)).margin(1e-8));
  }
}

TEST_CASE("disk separations match closed forms and a boundary-sampling oracle") {
  Vector c0(2), c1(2);
  c0 << 0, 3;
  c1 << 3, 0;
  const auto d0 = make_ball(c0, 1.0);
  const auto d1 = make_ball(c1, 1.0);
  const double centers = std::sqrt(18.0);
  const double amax = (centers + 2.0) * (centers + 2.0);  // 22 + 12 sqrt 2
  const double bmin = (centers - 2.0) * (centers - 2.0);  // 22 - 12 sqrt 2

  const auto mx = max_separation(d0, d1);
  const auto mn = min_separation(d0, d1);
  REQUIRE(mx.value2 == Catch::Approx(amax).epsilon(1e-12));
  REQUIRE(mn.value2 == Catch::Approx(bmin).epsilon(1e-10));

  // witness consistency
  REQUIRE((mx.p0 - mx.p1).squaredNorm() == Catch::Approx(mx.value2).margin(1e-8));
  REQUIRE((mn.p0 - mn.p1).squaredNorm() == Catch::Approx(mn.value2).margin(1e-8));

  // dense boundary-pair sampling oracle
  double smax = 0.0, smin = std::numeric_limits<double>::infinity();
  const int kSamp = 2000;
  for (int i = 0; i < kSamp; ++i) {
    const double a = 2.0 * M_PI * i / kSamp;
    for (int j = 0; j < kSamp; j += 7) {  // strided partner sweep keeps this fast
      const double b = 2.0 * M_PI * j / kSamp;
      Vector p(2), q(2);
      p << c0(0) + std::cos(a), c0(1) + std::sin(a);
      q << c1(0) + std::cos(b), c1(1) + std::sin(b);
      const double d2 = (p - q).squaredNorm();
      smax = std::max(smax, d2);
      smin = std::min(smin, d2);
    }
  }
  REQUIRE(mx.value2 == Catch::Approx(smax).epsilon(1e-3));
  REQUIRE(mn.value2 == Catch::Approx(smin).epsilon(1e-3));
}

TEST_CASE("identical single points have zero separation both ways") {
  Vector p(3);
  p << 1, 2, 3;
  const auto a = make_point(p);
  const auto b = make_point(p);
  REQUIRE(max_separation(a, b).value2 == 0.0);
  REQUIRE(min_separation(a, b).value2 == 0.0);
}

TEST_CASE("point-cloud separations equal exhaustive pairwise enumeration exactly") {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 4);
    const int k0 = 1 + static_cast<int>(rng() % 50);
    const int k1 = 1 + static_cast<int>(rng() % 50);
    const Matrix a = rand_cloud(n, k0, rng, 5.0);
    const Matrix b = rand_cloud(n, k1, rng, 5.0);
    double emax = -1.0, emin = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < a.cols(); ++i) {
      for (Eigen::Index j = 0; j < b.cols(); ++j) {
        const double d2 = (a.col(i) - b.col(j)).squaredNorm();
        emax = std::max(emax, d2);
        emin = std::min(emin, d2);
      }
    }
    const auto sa = make_point_cloud(a), sb = make_point_cloud(b);
    REQUIRE(max_separation(sa, sb).value2 == emax);
    REQUIRE(min_separation(sa, sb).value2 == emin);
  }
}

TEST_CASE("hull distance from the support-oracle algorithm matches exact planar geometry") {
  std::mt19937_64 rng(505);
  int checked = 0;
  for (int trial = 0; trial < 120; ++trial) {
    const Matrix a = rand_cloud(2, 2 + static_cast<int>(rng() % 12), rng, 4.0) ;
    Matrix b = rand_cloud(2, 2 + static_cast<int>(rng() % 12), rng, 4.0);
    if (trial % 3 == 0) b.colwise() += Vector::Constant(2, 6.0);  // force some disjoint cases
    const double want = polygon_distance(hull2d(a), hull2d(b));
    const auto got = gjk_min_separation(make_polytope(a), make_polytope(b));
    INFO("trial " << trial << " want " << want);
    REQUIRE(std::sqrt(got.value2) == Catch::Approx(want).margin(1e-10));
    ++checked;
  }
  REQUIRE(checked == 120);
}

TEST_CASE("hull distance in one dimension reduces to interval arithmetic") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 40; ++trial) {
    const Matrix a = rand_cloud(1, 1 + static_cast<int>(rng() % 10), rng, 5.0);
    const Matrix b = rand_cloud(1, 1 + static_cast<int>(rng() % 10), rng, 5.0);
    const double lo0 = a.minCoeff(), hi0 = a.maxCoeff();
    const double lo1 = b.minCoeff(), hi1 = b.maxCoeff();
    const double want = std::max({0.0, lo1 - hi0, lo0 - hi1});
    const auto got = gjk_min_separation(make_polytope(a), make_polytope(b));
    REQUIRE(std::sqrt(got.value2) == Catch::Approx(want).margin(1e-12));
  }
}

TEST_CASE("hull distance carries a support-duality certificate in higher dimensions") {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 2);
    const Matrix a = rand_cloud(n, 4 + static_cast<int>(rng() % 20), rng, 4.0);
    Matrix b = rand_cloud(n, 4 + static_cast<int>(rng() % 20), rng, 4.0);
    if (trial % 2 == 0) b.colwise() += Vector::Constant(n, 5.0);
    const auto got = gjk_min_separation(make_polytope(a), make_polytope(b));
    if (got.value2 == 0.0) {
      // coincidence witness: the same point reached from both hulls
      REQUIRE((got.p0 - got.p1).norm() < 1e-9);
      continue;
    }
    const Vector y = got.direction;
    REQUIRE(y.norm() == Catch::Approx(1.0).margin(1e-12));
    const double lb = -(cloud_support(a, -y) + cloud_support(b, y));
    const double ub = std::sqrt(got.value2);
    REQUIRE(lb <= ub + 1e-12);
    REQUIRE(ub * ub - std::max(0.0, lb) * std::max(0.0, lb) <= 1e-10 * std::max(1.0, ub * ub));
  }
}

TEST_CASE("separation pair invariants on random instances") {
  std::mt19937_64 rng(808);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 3);
    const auto a = rand_support(n, trial, rng);
    const auto b = rand_support(n, trial + 1, rng);
    const auto pair = classical_separations(a, b);
    REQUIRE(pair.beta_tilde >= 0.0);
    REQUIRE(pair.beta_tilde <= pair.alpha_tilde);
    REQUIRE((pair.witness_max_0 - pair.witness_max_1).squaredNorm() ==
            Catch::Approx(pair.alpha_tilde).margin(1e-8));
    if (!(std::holds_alternative<PointCloud>(a.body) && std::holds_alternative<PointCloud>(b.body)))
      REQUIRE((pair.witness_min_0 - pair.witness_min_1).squaredNorm() ==
              Catch::Approx(pair.beta_tilde).margin(1e-8));
  }
}

TEST_CASE("overlap is reported exactly when the minimal separation vanishes") {
  const auto a = make_ball(Vector::Zero(2), 1.0);
  Vector c(2);
  c << 1.5, 0.0;
  const auto b = make_ball(c, 1.0);  // overlapping
  const auto touching = classical_separations(a, b);
  REQUIRE(touching.beta_tilde == 0.0);
  REQUIRE(touching.overlap);

  Vector far(2);
  far << 5, 0;
  const auto apart = classical_separations(a, make_ball(far, 1.0));
  REQUIRE(apart.beta_tilde == Catch::Approx(9.0).epsilon(1e-10));
  REQUIRE_FALSE(apart.overlap);

  const auto same = classical_separations(a, a);
  REQUIRE(same.beta_tilde == 0.0);
}

TEST_CASE("linear separations reduce to plain separations for the identity bundle") {
  const auto sys = make_brownian(2, 0.5);
  const auto g = controllability_gramian(sys, 0.0, 1.0);
  Vector c1(2);
  c1 << 4, 0;
  const auto a = make_ball(Vector::Zero(2), 1.0);
  const auto b = make_ball(c1, 1.0);
  const auto pair = linear_separations(g, a, b);
  REQUIRE(pair.alpha_tilde == Catch::Approx(36.0).epsilon(1e-9));
  REQUIRE(pair.beta_tilde == Catch::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("linear separations of the double-integrator instance hit the disk values") {
  const auto sys = make_double_integrator(0.5);
  const auto g = controllability_gramian(sys, 0.0, 1.0);
  Vector e0(2), e1(2);
  e0 << 0, 3;
  e1 << 3, 0;
  const auto x0 = make_ellipsoid(g.Phi.inverse() * g.M_sqrt * e0,
                                 g.Phi.inverse() * g.M * g.Phi.inverse().transpose());
  const auto x1 = make_ellipsoid(g.M_sqrt * e1, g.M);
  const auto pair = linear_separations(g, x0, x1);
  REQUIRE(pair.alpha_tilde == Catch::Approx(22.0 + 12.0 * std::sqrt(2.0)).epsilon(1e-9));
  REQUIRE(pair.beta_tilde == Catch::Approx(22.0 - 12.0 * std::sqrt(2.0)).epsilon(1e-8));

  // boundary point clouds approximate the smooth answer to well under 1%
  const int kB = 200;
  Matrix p0(2, kB), p1(2, kB);
  const Matrix l0 = Matrix(std::get<Ellipsoid>(x0.body).S.llt().matrixL());
  const Matrix l1 = Matrix(std::get<Ellipsoid>(x1.body).S.llt().matrixL());
  for (int i = 0; i < kB; ++i) {
    const double th = 2.0 * M_PI * i / kB;
    Vector u(2);
    u << std::cos(th), std::sin(th);
    p0.col(i) = std::get<Ellipsoid>(x0.body).c + l0 * u;
    p1.col(i) = std::get<Ellipsoid>(x1.body).c + l1 * u;
  }
  const auto cloud_pair = linear_separations(g, make_point_cloud(p0), make_point_cloud(p1));
  REQUIRE(cloud_pair.alpha_tilde == Catch::Approx(pair.alpha_tilde).epsilon(0.01));
  REQUIRE(cloud_pair.beta_tilde == Catch::Approx(pair.beta_tilde).epsilon(0.01));
}

TEST_CASE("membership checks per variant") {
  const auto ball = make_ball(Vector::Zero(2), 1.0);
  Vector in(2), out(2);
  in << 0.3, 0.4;
  out << 1.2, 0.0;
  REQUIRE(contains(ball, in));
  REQUIRE_FALSE(contains(ball, out));

  Matrix sq(2, 4);
  sq << 0, 1, 1, 0, 0, 0, 1, 1;
  const auto poly = make_polytope(sq);
  Vector mid(2);
  mid << 0.5, 0.5;
  REQUIRE(contains(poly, mid));
  Vector off(2);
  off << 1.5, 0.5;
  REQUIRE_FALSE(contains(poly, off));

  const auto cloud = make_point_cloud(sq);
  REQUIRE(contains(cloud, Vector(sq.col(2))));
  REQUIRE_FALSE(contains(cloud, mid));  // finite-set reading

  const auto ell = make_ellipsoid(Vector::Zero(2), 4.0 * Matrix::Identity(2, 2));
  Vector e(2);
  e << 1.9, 0.0;
  REQUIRE(contains(ell, e));
  REQUIRE_FALSE(contains(ell, Vector(2.1 * e)));
}

TEST_CASE("construction validation") {
  REQUIRE_THROWS_AS(make_ball(Vector::Zero(2), 0.0), DomainError);
  REQUIRE_THROWS_AS(make_ball(Vector::Zero(2), -1.0), DomainError);
  Matrix notspd(2, 2);
  notspd << 1, 0, 0, -1;
  REQUIRE_THROWS_AS(make_ellipsoid(Vector::Zero(2), notspd), DomainError);
  Matrix nosym(2, 2);
  nosym << 1, 0.5, 0, 1;
  REQUIRE_THROWS_AS(make_ellipsoid(Vector::Zero(2), nosym), DomainError);
  REQUIRE_THROWS_AS(make_polytope(Matrix(2, 0)), DomainError);
  REQUIRE_THROWS_AS(support_function(make_ball(Vector::Zero(2), 1.0), Vector::Zero(3)),
                    DimensionError);
}
