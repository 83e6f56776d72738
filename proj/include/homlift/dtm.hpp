#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "homlift/common.hpp"
#include "homlift/measure.hpp"
#include "homlift/persistence.hpp"
#include "homlift/point_cloud.hpp"

namespace homlift {

/// Distance to measure with mass parameter m in (0, 1):
///   d^2(x) = (1/m) * integral_0^m delta^2_{mu,t}(x) dt,
/// evaluated exactly for an empirical measure: with distances sorted
/// ascending and cumulative weights W_k, the quantile function t ->
/// delta_{mu,t}(x) is the step function equal to r_(k) on [W_{k-1}, W_k), so
/// the integral is a weighted sum of squared distances in which the last atom
/// contributes only its partial mass. No rounding of m*N to an integer
/// neighbour count happens anywhere.
inline double dtm(const EmpiricalMeasure& mu, double m, const Vector& x) {
  if (!(m > 0.0 && m < 1.0))
    throw validation_error("dtm: mass parameter must lie in (0, 1)");
  const std::size_t n = mu.size();
  std::vector<std::pair<double, double>> atoms(n);  // (distance, weight)
  for (std::size_t i = 0; i < n; ++i)
    atoms[i] = {(x - mu.points.points[i]).norm(), mu.weights[i]};
  std::sort(atoms.begin(), atoms.end());
  double integral = 0.0, cum = 0.0;
  for (const auto& [dist, w] : atoms) {
    double lo = std::min(cum, m);
    cum += w;
    double hi = std::min(cum, m);
    integral += (hi - lo) * dist * dist;
    if (cum >= m) break;
  }
  return std::sqrt(integral / m);
}

/// Vectorized DTM over a query cloud.
inline std::vector<double> dtm_field(const EmpiricalMeasure& mu, double m,
                                     const PointCloud& queries) {
  std::vector<double> out(queries.size());
  for (std::size_t i = 0; i < queries.size(); ++i)
    out[i] = dtm(mu, m, queries.points[i]);
  return out;
}

/// c(mu) = sup of the DTM over the support of mu; controls the regularity of
/// the measure in the DTM-filtration stability bounds.
inline double c_mu(const EmpiricalMeasure& mu, double m) {
  std::vector<double> field = dtm_field(mu, m, mu.points);
  return *std::max_element(field.begin(), field.end());
}

struct BettiResult {
  std::vector<int> betti;   // betti[k], k = 0..max_dim
  bool empty_sublevel = false;
};

/// Betti numbers of the DTM sublevel set {dtm <= t}, proxied by a Rips
/// complex at a single scale: keep the points whose value is below t, build
/// the Rips complex at link_radius and count the classes alive at that scale.
/// link_radius is an explicit parameter; nothing is auto-tuned.
inline BettiResult sublevel_betti(const PointCloud& points,
                                  const std::vector<double>& dtm_values,
                                  double t, double link_radius, int max_dim,
                                  std::int64_t simplex_cap = kDefaultSimplexCap) {
  if (dtm_values.size() != points.size())
    throw validation_error("sublevel_betti: value count mismatch");
  if (!(link_radius > 0.0))
    throw validation_error("sublevel_betti: link_radius must be > 0");
  BettiResult out;
  out.betti.assign(max_dim + 1, 0);
  PointCloud kept(points.ambient_dim);
  for (std::size_t i = 0; i < points.size(); ++i)
    if (dtm_values[i] <= t) kept.add(points.points[i]);
  if (kept.empty()) {
    out.empty_sublevel = true;
    return out;
  }
  // Classes of dimension k need (k+1)-simplices to die, so build one
  // dimension above the requested range.
  Filtration f =
      rips_filtration(kept, max_dim + 1, link_radius, simplex_cap);
  PersistencePairs pairs = reduce_filtration(f);
  for (int k = 0; k <= max_dim; ++k)
    out.betti[k] = static_cast<int>(pairs.unpaired[k].size());
  return out;
}

}  // namespace homlift
