#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "homlift/common.hpp"

namespace homlift {

/// Finite list of points in R^n.
struct PointCloud {
  std::vector<Vector> points;
  int ambient_dim = 0;

  PointCloud() = default;
  explicit PointCloud(int dim) : ambient_dim(dim) {}
  PointCloud(std::vector<Vector> pts, int dim)
      : points(std::move(pts)), ambient_dim(dim) {}

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }

  void add(const Vector& p) { points.push_back(p); }

  /// Every point has dimension ambient_dim and finite coordinates.
  void validate() const {
    for (const Vector& p : points) {
      if (p.size() != ambient_dim)
        throw validation_error("PointCloud: point dimension mismatch");
      if (!p.allFinite())
        throw validation_error("PointCloud: non-finite coordinate");
    }
  }
};

/// Directed Hausdorff distance: max over a of min over b of |a-b|.
inline double directed_hausdorff(const PointCloud& a, const PointCloud& b) {
  if (a.empty() || b.empty())
    throw validation_error("hausdorff_distance: empty point cloud");
  double worst = 0.0;
  for (const Vector& p : a.points) {
    double best = kInfinity;
    for (const Vector& q : b.points) {
      double d = (p - q).norm();
      if (d < best) best = d;
    }
    if (best > worst) worst = best;
  }
  return worst;
}

/// Symmetric Hausdorff distance between two nonempty clouds of equal
/// ambient dimension.
inline double hausdorff_distance(const PointCloud& a, const PointCloud& b) {
  if (a.ambient_dim != b.ambient_dim)
    throw validation_error("hausdorff_distance: ambient dimension mismatch");
  return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

}  // namespace homlift
