#pragma once

#include <cmath>
#include <numeric>
#include <vector>

#include "homlift/common.hpp"
#include "homlift/lift.hpp"
#include "homlift/point_cloud.hpp"

namespace homlift {

/// Weighted point cloud with weights summing to 1.
struct EmpiricalMeasure {
  PointCloud points;
  std::vector<double> weights;

  static EmpiricalMeasure uniform(PointCloud cloud) {
    EmpiricalMeasure nu;
    const std::size_t n = cloud.size();
    if (n == 0) throw validation_error("EmpiricalMeasure: empty support");
    nu.points = std::move(cloud);
    nu.weights.assign(n, 1.0 / static_cast<double>(n));
    return nu;
  }

  std::size_t size() const { return points.size(); }

  void validate() const {
    if (weights.size() != points.size())
      throw validation_error("EmpiricalMeasure: weight count mismatch");
    double sum = 0.0;
    for (double w : weights) {
      if (!(w > 0.0)) throw validation_error("EmpiricalMeasure: weight <= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw validation_error("EmpiricalMeasure: weights do not sum to 1");
    points.validate();
  }
};

/// Second moment of the measure restricted to the closed ball B(x, r),
/// centered at x, together with the mass of that ball.
struct LocalCovariance {
  Matrix matrix;
  double ball_mass = 0.0;
  double radius = 0.0;
};

/// Sigma^r_nu(x) = sum_{|y-x| <= r} w_y (x-y)(x-y)^T / nu(B(x,r)).
/// Closed-ball convention: a point exactly at distance r is included.
inline LocalCovariance local_covariance(const EmpiricalMeasure& nu,
                                        const Vector& x, double r) {
  if (r <= 0.0) throw validation_error("local_covariance: radius must be > 0");
  const int n = nu.points.ambient_dim;
  if (x.size() != n)
    throw validation_error("local_covariance: query dimension mismatch");
  Matrix sigma = Matrix::Zero(n, n);
  double mass = 0.0;
  const double r2 = r * r;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    Vector diff = x - nu.points.points[i];
    double d2 = diff.squaredNorm();
    if (d2 <= r2) {
      sigma.noalias() += nu.weights[i] * (diff * diff.transpose());
      mass += nu.weights[i];
    }
  }
  if (mass <= 0.0)
    throw validation_error("local_covariance: empty neighborhood");
  return {sigma / mass, mass, r};
}

/// Normalized local covariance matrix Sigma / r^2; eigenvalues in [0, 1].
inline Matrix normalized_local_covariance(const EmpiricalMeasure& nu,
                                          const Vector& x, double r) {
  return local_covariance(nu, x, r).matrix / (r * r);
}

/// Lifted measure: attaches to every support point its normalized local
/// covariance matrix at scale r. Weights are carried over unchanged.
inline LiftedMeasure lift_measure(const EmpiricalMeasure& nu, double r) {
  LiftedMeasure out;
  out.cloud.ambient_dim = nu.points.ambient_dim;
  out.weights = nu.weights;
  for (std::size_t i = 0; i < nu.size(); ++i) {
    const Vector& x = nu.points.points[i];
    out.cloud.add(x, normalized_local_covariance(nu, x, r));
  }
  return out;
}

}  // namespace homlift
