#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "sbridge/precondition.hpp"
#include "sbridge/linear_system.hpp"

using namespace sbridge;

namespace {

Vector vec2(double a, double b) {
  Vector v(2);
  v << a, b;
  return v;
}

double tanh2(double x) { return std::pow(std::tanh(x), 2); }

/// Ellipsoid pair whose whitened images are unit disks at (0,3) and (3,0),
/// together with the moments of the uniform laws on them.
struct TiltedDiskPair {
  GramianBundle g;
  ConvexSupport set0, set1;
  Vector mean0, mean1;
  Matrix cov0, cov1;
};

TiltedDiskPair tilted_disks(double epsilon) {
  TiltedDiskPair d{controllability_gramian(make_double_integrator(epsilon), 0.0, 1.0),
                   {}, {}, {}, {}, {}, {}};
  const Matrix phi_inv = d.g.Phi.inverse();
  const Matrix s0 = phi_inv * d.g.M * phi_inv.transpose();
  d.mean0 = phi_inv * (d.g.M_sqrt * vec2(0.0, 3.0));
  d.mean1 = d.g.M_sqrt * vec2(3.0, 0.0);
  d.set0 = make_ellipsoid(d.mean0, s0);
  d.set1 = make_ellipsoid(d.mean1, d.g.M);
  d.cov0 = s0 / 4.0;  // uniform law on an ellipsoid has covariance S/4
  d.cov1 = d.g.M / 4.0;
  return d;
}

}  // namespace

TEST_CASE("tilted-disk pair whitens onto unit disks and recenters to the origin") {
  const auto d = tilted_disks(0.5);
  const auto rec = precondition_supports(d.g, 0.5, d.set0, d.set1, d.mean0, d.mean1, d.cov0,
                                         d.cov1, 1);
  REQUIRE(rec.applicable);
  REQUIRE((rec.pushforward_cov0 - 0.25 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);
  REQUIRE((rec.pushforward_cov1 - 0.25 * Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-10);

  // both recentered images are the origin-centered unit disk
  for (int k = 0; k < 64; ++k) {
    const double a = 2.0 * M_PI * k / 64;
    const Vector y = vec2(std::cos(a), std::sin(a));
    REQUIRE(support_function(rec.set0_out, y) == Catch::Approx(1.0).margin(1e-9));
    REQUIRE(support_function(rec.set1_out, y) == Catch::Approx(1.0).margin(1e-9));
  }
  REQUIRE(center_of(rec.set0_out).norm() < 1e-12);
  REQUIRE(center_of(rec.set1_out).norm() < 1e-12);

  // the map on record reproduces the output set
  REQUIRE((rec.map0.apply(d.mean0)).norm() < 1e-12);
  REQUIRE((rec.map1.apply(d.mean1)).norm() < 1e-12);
}

TEST_CASE("recentring the tilted disks improves the coefficient as published") {
  const auto d = tilted_disks(0.5);

  SECTION("plain separations") {
    const auto rec = precondition_supports(d.g, 0.5, d.set0, d.set1, d.mean0, d.mean1, d.cov0,
                                           d.cov1, 1);
    REQUIRE(rec.gamma_before.gamma == Catch::Approx(tanh2(1.0)).margin(1e-10));
    REQUIRE(rec.gamma_after.has_value());
    REQUIRE(rec.gamma_after->gamma == Catch::Approx(tanh2(0.5)).margin(1e-10));
    REQUIRE(rec.gamma_after->separations.overlap);
    REQUIRE(rec.gamma_after->beta_tilde == 0.0);

    const auto cmp = compare_gamma(rec);
    REQUIRE(cmp.improved);
    REQUIRE(cmp.improvement == Catch::Approx(tanh2(1.0) / tanh2(0.5)).margin(1e-9));
    REQUIRE(cmp.improvement == Catch::Approx(0.580 / 0.214).epsilon(0.01));
  }

  SECTION("squared separations") {
    const auto rec = precondition_supports(d.g, 0.5, d.set0, d.set1, d.mean0, d.mean1, d.cov0,
                                           d.cov1, 2);
    REQUIRE(rec.gamma_before.gamma ==
            Catch::Approx(tanh2(6.0 * std::sqrt(2.0))).margin(1e-10));
    REQUIRE(rec.gamma_after->gamma == Catch::Approx(tanh2(1.0)).margin(1e-10));
    REQUIRE(compare_gamma(rec).improved);
  }
}

TEST_CASE("before-coefficient equals the linear-kernel coefficient of the raw pair") {
  const auto d = tilted_disks(0.5);
  const auto sys = make_double_integrator(0.5);
  for (const int power : {1, 2}) {
    const auto rec = precondition_supports(d.g, 0.5, d.set0, d.set1, d.mean0, d.mean1, d.cov0,
                                           d.cov1, power);
    GammaOptions opt;
    opt.separation_power = power;
    const auto direct = gamma_linear(sys, d.set0, d.set1, opt);
    REQUIRE(rec.gamma_before.gamma == Catch::Approx(direct.gamma).margin(1e-12));
    REQUIRE(rec.gamma_before.alpha_tilde == Catch::Approx(direct.alpha_tilde).margin(1e-9));
    REQUIRE(rec.gamma_before.beta_tilde == Catch::Approx(direct.beta_tilde).margin(1e-9));
  }
}

TEST_CASE("identical centered balls are a fixed point of the procedure") {
  const auto g = controllability_gramian(make_brownian(2, 0.5), 0.0, 1.0);
  const Matrix cov = 0.25 * Matrix::Identity(2, 2);

  // origin-centered: the translation is the identity, so the coefficients match exactly
  const auto ball0 = make_ball(vec2(0.0, 0.0), 1.0);
  const auto rec0 = precondition_supports(g, 0.5, ball0, ball0, Vector::Zero(2), Vector::Zero(2),
                                          cov, cov, 2);
  REQUIRE(rec0.applicable);
  const auto cmp0 = compare_gamma(rec0);
  REQUIRE(cmp0.gamma_after == cmp0.gamma_before);
  REQUIRE(cmp0.improvement == 1.0);
  REQUIRE_FALSE(cmp0.improved);

  // off-origin identical balls recentre to the same geometry up to roundoff
  const auto ball1 = make_ball(vec2(2.0, 1.0), 1.0);
  const auto rec1 = precondition_supports(g, 0.5, ball1, ball1, vec2(2.0, 1.0), vec2(2.0, 1.0),
                                          cov, cov, 2);
  REQUIRE(rec1.applicable);
  const auto cmp1 = compare_gamma(rec1);
  REQUIRE(cmp1.gamma_after == Catch::Approx(cmp1.gamma_before).margin(1e-13));
}

TEST_CASE("covariance gate rejects unequal or non-diagonal pushforwards") {
  const auto g = controllability_gramian(make_brownian(2, 0.5), 0.0, 1.0);
  const auto b0 = make_ball(vec2(0.0, 0.0), 1.0);
  const auto b1 = make_ball(vec2(3.0, 0.0), 1.0);
  const Matrix diag = 0.25 * Matrix::Identity(2, 2);

  Matrix tilted(2, 2);
  tilted << 0.3, 0.1, 0.1, 0.3;
  const auto rec1 = precondition_supports(g, 0.5, b0, b1, vec2(0, 0), vec2(3, 0), diag, tilted);
  REQUIRE_FALSE(rec1.applicable);
  REQUIRE_FALSE(rec1.gamma_after.has_value());
  REQUIRE(rec1.map0.shift.norm() == 0.0);
  REQUIRE(rec1.map1.shift.norm() == 0.0);
  REQUIRE_THROWS_AS(compare_gamma(rec1), DomainError);

  Matrix unequal(2, 2);
  unequal << 0.5, 0.0, 0.0, 0.25;
  const auto rec2 = precondition_supports(g, 0.5, b0, b1, vec2(0, 0), vec2(3, 0), diag, unequal);
  REQUIRE_FALSE(rec2.applicable);

  // the whitened sets and the before-coefficient are still reported
  REQUIRE(rec2.gamma_before.gamma > 0.0);
  REQUIRE(support_function(rec2.set1_out, vec2(1, 0)) == Catch::Approx(4.0).margin(1e-12));
}

TEST_CASE("measure-driven preconditioning reads the moments off the atoms") {
  // four-point crosses have exact mean c and covariance (a^2/2) I
  const double a = 0.5;
  const auto cross = [&](const Vector& c) {
    Matrix pts(2, 4);
    pts.col(0) = c + vec2(a, 0);
    pts.col(1) = c - vec2(a, 0);
    pts.col(2) = c + vec2(0, a);
    pts.col(3) = c - vec2(0, a);
    DiscreteMeasure m;
    m.support = make_point_cloud(pts);
    m.points = pts;
    m.weights = Vector::Constant(4, 0.25);
    m.densities = Vector::Ones(4);
    return m;
  };
  const auto mu0 = cross(vec2(1.0, 2.0));
  const auto mu1 = cross(vec2(-2.0, 0.5));
  const auto g = controllability_gramian(make_brownian(2, 0.5), 0.0, 1.0);

  const auto rec = precondition_measures(g, 0.5, mu0, mu1);
  REQUIRE(rec.applicable);
  REQUIRE(center_of(rec.set0_out).norm() < 1e-12);
  REQUIRE(center_of(rec.set1_out).norm() < 1e-12);

  // after recentring both crosses coincide, so the worst-case pair is known
  REQUIRE(rec.gamma_after->alpha_tilde == Catch::Approx(4 * a * a).margin(1e-12));
  REQUIRE(rec.gamma_after->beta_tilde == 0.0);
}

TEST_CASE("recentring equal-shape pairs never increases the coefficient") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> uc(-4.0, 4.0), ud(0.3, 2.0);
  const auto g = controllability_gramian(make_brownian(2, 1.0), 0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    Matrix l = Matrix::Zero(2, 2);
    l(0, 0) = ud(rng);
    l(1, 1) = ud(rng);
    const Matrix s = l * l.transpose();
    const Vector c0 = vec2(uc(rng), uc(rng)), c1 = vec2(uc(rng), uc(rng));
    const auto rec = precondition_supports(g, 1.0, make_ellipsoid(c0, s), make_ellipsoid(c1, s),
                                           c0, c1, s / 4, s / 4, 2);
    REQUIRE(rec.applicable);
    REQUIRE(rec.gamma_after->gamma <= rec.gamma_before.gamma + 1e-12);
  }
}
