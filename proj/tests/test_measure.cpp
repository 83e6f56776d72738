#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "homlift/homlift.hpp"

using namespace homlift;

namespace {

EmpiricalMeasure two_point_measure(double a, double b) {
  PointCloud cloud(1);
  Vector v(1);
  v[0] = a;
  cloud.add(v);
  v[0] = b;
  cloud.add(v);
  return EmpiricalMeasure::uniform(cloud);
}

Vector scalar(double x) {
  Vector v(1);
  v[0] = x;
  return v;
}

}  // namespace

TEST_CASE("local covariance of a Dirac mass is zero") {
  PointCloud cloud(2);
  Vector x(2);
  x << 0.3, -0.7;
  cloud.add(x);
  EmpiricalMeasure nu = EmpiricalMeasure::uniform(cloud);
  LocalCovariance lc = local_covariance(nu, x, 0.5);
  REQUIRE(lc.ball_mass == Catch::Approx(1.0));
  REQUIRE(lc.matrix.cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(normalized_local_covariance(nu, x, 0.5).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("two-atom measure at scale 1 reproduces the closed form") {
  // mu = (delta_0 + delta_1)/2, r = 1: both atoms fall in the closed ball,
  // Sigma(0) = Sigma(1) = 1/2.
  EmpiricalMeasure mu = two_point_measure(0.0, 1.0);
  LocalCovariance at0 = local_covariance(mu, scalar(0.0), 1.0);
  LocalCovariance at1 = local_covariance(mu, scalar(1.0), 1.0);
  REQUIRE(at0.matrix(0, 0) == Catch::Approx(0.5));
  REQUIRE(at1.matrix(0, 0) == Catch::Approx(0.5));
  REQUIRE(at0.ball_mass == Catch::Approx(1.0));
}

TEST_CASE("closed-ball convention includes the boundary point") {
  // Crafted so the second atom is exactly at distance r: open balls would
  // produce a zero matrix.
  EmpiricalMeasure mu = two_point_measure(0.0, 0.25);
  LocalCovariance lc = local_covariance(mu, scalar(0.0), 0.25);
  REQUIRE(lc.ball_mass == Catch::Approx(1.0));
  REQUIRE(lc.matrix(0, 0) == Catch::Approx(0.5 * 0.25 * 0.25));
}

TEST_CASE("empty neighbourhood raises") {
  EmpiricalMeasure mu = two_point_measure(0.0, 1.0);
  REQUIRE_THROWS_AS(local_covariance(mu, scalar(10.0), 0.5), validation_error);
}

TEST_CASE("segment sample matches r^2/3") {
  // 1e5 uniform samples on [-r, r]; the local covariance at 0 approaches
  // r^2 * 1/(d+2) with d = 1.
  const double r = 0.8;
  SplitMix64 rng(314);
  PointCloud cloud(1);
  for (int i = 0; i < 100000; ++i) cloud.add(scalar(rng.uniform(-r, r)));
  EmpiricalMeasure nu = EmpiricalMeasure::uniform(cloud);
  LocalCovariance lc = local_covariance(nu, scalar(0.0), r);
  double expected = r * r / 3.0;
  REQUIRE(lc.matrix(0, 0) == Catch::Approx(expected).epsilon(0.02));
  Matrix norm = normalized_local_covariance(nu, scalar(0.0), r);
  REQUIRE(norm(0, 0) == Catch::Approx(1.0 / 3.0).epsilon(0.02));
}

TEST_CASE("normalized covariance approximates the rescaled tangent projection") {
  // Dense lemniscate sample, query far from the double point.
  ParametricShape lem = make_lemniscate();
  SampleResult s = sample_uniform(lem, 20000, 77);
  EmpiricalMeasure nu = EmpiricalMeasure::uniform(s.cloud);
  const double r = 0.1;
  Vector x = lem.eval_at(0.0);  // rightmost point, normal reach ~ 1
  Matrix sigma = normalized_local_covariance(nu, x, r);
  Matrix p = tangent_projection(lem, 0.0) / 3.0;
  REQUIRE(frobenius_distance(sigma, p) <= 0.5 * r);
}

TEST_CASE("normalized covariance eigenvalues stay in [0,1] on random measures") {
  SplitMix64 rng(5150);
  for (int trial = 0; trial < 50; ++trial) {
    PointCloud cloud(3);
    int n = 2 + static_cast<int>(rng.next_double() * 20);
    for (int i = 0; i < n; ++i) {
      Vector p(3);
      p << rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1);
      cloud.add(p);
    }
    EmpiricalMeasure nu = EmpiricalMeasure::uniform(cloud);
    double r = 0.2 + rng.next_double();
    for (const Vector& x : nu.points.points) {
      Matrix sigma = normalized_local_covariance(nu, x, r);
      Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
      REQUIRE(es.eigenvalues().minCoeff() >= -1e-10);
      REQUIRE(es.eigenvalues().maxCoeff() <= 1.0 + 1e-10);
    }
  }
}

TEST_CASE("lift of a Dirac is a single zero-matrix entry") {
  PointCloud cloud(2);
  Vector a(2);
  a << 1.5, -2.0;
  cloud.add(a);
  EmpiricalMeasure nu = EmpiricalMeasure::uniform(cloud);
  LiftedMeasure lifted = lift_measure(nu, 0.3);
  REQUIRE(lifted.cloud.size() == 1);
  REQUIRE((lifted.cloud.base_points[0] - a).norm() == 0.0);
  REQUIRE(lifted.cloud.matrices[0].cwiseAbs().maxCoeff() == 0.0);
  REQUIRE(lifted.weights[0] == Catch::Approx(1.0));
}

TEST_CASE("lift of the two-atom measure matches the closed form") {
  EmpiricalMeasure mu = two_point_measure(0.0, 1.0);
  LiftedMeasure lifted = lift_measure(mu, 1.0);
  REQUIRE(lifted.cloud.size() == 2);
  REQUIRE(lifted.cloud.matrices[0](0, 0) == Catch::Approx(0.5));
  REQUIRE(lifted.cloud.matrices[1](0, 0) == Catch::Approx(0.5));
  REQUIRE(lifted.weights == mu.weights);
}

TEST_CASE("lifted matrices have trace at most 1") {
  SplitMix64 rng(8);
  PointCloud cloud(2);
  for (int i = 0; i < 100; ++i) {
    Vector p(2);
    p << rng.uniform(-1, 1), rng.uniform(-1, 1);
    cloud.add(p);
  }
  EmpiricalMeasure nu = EmpiricalMeasure::uniform(cloud);
  LiftedMeasure lifted = lift_measure(nu, 0.4);
  lifted.cloud.validate();
  for (const Matrix& m : lifted.cloud.matrices)
    REQUIRE(m.trace() <= 1.0 + 1e-12);
}

TEST_CASE("gamma embedding realizes the gamma-norm") {
  LiftedCloud cloud;
  cloud.ambient_dim = 2;
  cloud.add(Vector::Zero(2), Matrix::Zero(2, 2));
  PointCloud embedded = gamma_embed(cloud, 1.0);
  REQUIRE(embedded.ambient_dim == 6);
  REQUIRE(embedded.points[0].norm() == 0.0);

  SplitMix64 rng(21);
  for (int trial = 0; trial < 200; ++trial) {
    LiftedCloud pair;
    pair.ambient_dim = 2;
    for (int k = 0; k < 2; ++k) {
      Vector x(2);
      x << rng.uniform(-1, 1), rng.uniform(-1, 1);
      Matrix a(2, 2);
      a << rng.uniform(0, 1), rng.uniform(-1, 1), 0.0, rng.uniform(0, 1);
      a(1, 0) = a(0, 1);
      pair.add(x, a);
    }
    double gamma = 0.5 + 2.0 * rng.next_double();
    PointCloud e = gamma_embed(pair, gamma);
    double direct = std::sqrt(
        (pair.base_points[0] - pair.base_points[1]).squaredNorm() +
        gamma * gamma *
            (pair.matrices[0] - pair.matrices[1]).squaredNorm());
    REQUIRE((e.points[0] - e.points[1]).norm() == Catch::Approx(direct));
  }
}

TEST_CASE("gamma distances of the two-atom example") {
  // Entries (0, [1/2]) vs (0, [0]) and (1, [1/2]) vs (1+eps, [0]):
  // distances gamma/2 and sqrt(eps^2 + gamma^2/4).
  const double eps = 0.2, gamma = 2.0;
  LiftedCloud a, b;
  a.ambient_dim = b.ambient_dim = 1;
  Matrix half(1, 1), zero(1, 1);
  half << 0.5;
  zero << 0.0;
  Vector x(1);
  x[0] = 0.0;
  a.add(x, half);
  b.add(x, zero);
  x[0] = 1.0;
  a.add(x, half);
  x[0] = 1.0 + eps;
  b.add(x, zero);
  PointCloud ea = gamma_embed(a, gamma), eb = gamma_embed(b, gamma);
  REQUIRE((ea.points[0] - eb.points[0]).norm() == Catch::Approx(gamma / 2.0));
  REQUIRE((ea.points[1] - eb.points[1]).norm() ==
          Catch::Approx(std::sqrt(eps * eps + gamma * gamma / 4.0)));
}

TEST_CASE("tangent error field basics") {
  ParametricShape lem = make_lemniscate();
  std::vector<Vector> params;
  for (int i = 0; i < 32; ++i) params.push_back(make_param(i * 0.19));
  LiftedCloud exact = exact_lift(lem, params);
  std::vector<double> zero_errors = tangent_error_field(exact, exact);
  for (double e : zero_errors) REQUIRE(e == 0.0);

  LiftedCloud other = exact;
  other.base_points.pop_back();
  other.matrices.pop_back();
  REQUIRE_THROWS_AS(tangent_error_field(other, exact), validation_error);
}

TEST_CASE("tangent errors obey the eigenvalue bound") {
  ParametricShape lem = make_lemniscate();
  SampleResult s = sample_uniform(lem, 500, 12);
  EmpiricalMeasure nu = EmpiricalMeasure::uniform(s.cloud);
  LiftedMeasure lifted = lift_measure(nu, 0.1);
  LiftedCloud exact = exact_lift(lem, s.params);
  double bound = 1.0 + std::sqrt(1.0) / 3.0;
  for (double e : tangent_error_field(lifted.cloud, exact)) {
    REQUIRE(e >= 0.0);
    REQUIRE(e <= bound);
  }
}

TEST_CASE("smaller radius estimates tangents better on a dense sample") {
  ParametricShape lem = make_lemniscate();
  SampleResult s = sample_uniform(lem, 9000, 4242);
  EmpiricalMeasure nu = EmpiricalMeasure::uniform(s.cloud);
  LiftedCloud exact = exact_lift(lem, s.params);
  auto mean_error = [&](double r) {
    LiftedMeasure lifted = lift_measure(nu, r);
    std::vector<double> err = tangent_error_field(lifted.cloud, exact);
    double sum = 0.0;
    for (double e : err) sum += e;
    return sum / err.size();
  };
  REQUIRE(mean_error(0.1) < mean_error(0.5));
}

TEST_CASE("outer-product difference bound") {
  // |x (x)^T - y (y)^T|_F <= (|x| + |y|) |x - y|
  SplitMix64 rng(606);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      x[i] = rng.uniform(-2, 2);
      y[i] = rng.uniform(-2, 2);
    }
    Matrix ox = x * x.transpose();
    Matrix oy = y * y.transpose();
    REQUIRE(frobenius_distance(ox, oy) <=
            (x.norm() + y.norm()) * (x - y).norm() + 1e-12);
  }
}

TEST_CASE("empirical measure validation") {
  PointCloud cloud(1);
  Vector v(1);
  v[0] = 0.0;
  cloud.add(v);
  v[0] = 1.0;
  cloud.add(v);
  EmpiricalMeasure bad{cloud, {0.5, 0.6}};
  REQUIRE_THROWS_AS(bad.validate(), validation_error);
  EmpiricalMeasure good = EmpiricalMeasure::uniform(cloud);
  REQUIRE_NOTHROW(good.validate());
}
