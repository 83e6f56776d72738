#pragma once

#include <cmath>
#include <vector>

#include "homlift/common.hpp"
#include "homlift/point_cloud.hpp"

namespace homlift {

/// Pairs (base point, symmetric n x n matrix) living in R^n x M(R^n).
/// The matrix slot holds either a normalized local covariance matrix or a
/// rescaled tangent projection; both have trace at most 1.
struct LiftedCloud {
  std::vector<Vector> base_points;
  std::vector<Matrix> matrices;
  int ambient_dim = 0;
  int intrinsic_dim_hint = 1;

  std::size_t size() const { return base_points.size(); }
  bool empty() const { return base_points.empty(); }

  void add(const Vector& x, const Matrix& m) {
    base_points.push_back(x);
    matrices.push_back(m);
  }

  /// Checks symmetry (1e-10), positive semidefiniteness (min eigenvalue
  /// >= -1e-10) and the trace bound trace in [0, 1 + 1e-10].
  void validate() const {
    if (base_points.size() != matrices.size())
      throw validation_error("LiftedCloud: entry count mismatch");
    for (std::size_t i = 0; i < size(); ++i) {
      if (base_points[i].size() != ambient_dim)
        throw validation_error("LiftedCloud: base point dimension mismatch");
      const Matrix& m = matrices[i];
      if (m.rows() != ambient_dim || m.cols() != ambient_dim)
        throw validation_error("LiftedCloud: matrix dimension mismatch");
      if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw validation_error("LiftedCloud: matrix not symmetric");
      Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-10)
        throw validation_error("LiftedCloud: matrix not PSD");
      double tr = m.trace();
      if (tr < -1e-10 || tr > 1.0 + 1e-10)
        throw validation_error("LiftedCloud: trace outside [0, 1]");
    }
  }
};

/// A lifted cloud together with the weights of the measure it came from.
/// Weights are carried, never renormalized per point.
struct LiftedMeasure {
  LiftedCloud cloud;
  std::vector<double> weights;
};

/// Embeds (x, A) as the concatenation [x, gamma * A] with A flattened
/// row-major, so the Euclidean norm of a difference downstream equals the
/// gamma-norm |(x,A)|_gamma^2 = |x|^2 + gamma^2 |A|_F^2.
inline PointCloud gamma_embed(const LiftedCloud& lifted, double gamma) {
  if (gamma <= 0.0) throw validation_error("gamma_embed: gamma must be > 0");
  const int n = lifted.ambient_dim;
  PointCloud out(n + n * n);
  out.points.reserve(lifted.size());
  for (std::size_t i = 0; i < lifted.size(); ++i) {
    Vector v(n + n * n);
    v.head(n) = lifted.base_points[i];
    const Matrix& m = lifted.matrices[i];
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) v[n + r * n + c] = gamma * m(r, c);
    out.points.push_back(std::move(v));
  }
  return out;
}

/// Per-entry Frobenius distance between two lifted clouds matched by index.
inline std::vector<double> tangent_error_field(const LiftedCloud& estimated,
                                               const LiftedCloud& exact) {
  if (estimated.size() != exact.size())
    throw validation_error("tangent_error_field: length mismatch");
  std::vector<double> errors(estimated.size());
  for (std::size_t i = 0; i < estimated.size(); ++i)
    errors[i] = frobenius_distance(estimated.matrices[i], exact.matrices[i]);
  return errors;
}

}  // namespace homlift
