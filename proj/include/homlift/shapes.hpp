#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "homlift/common.hpp"
#include "homlift/lift.hpp"
#include "homlift/point_cloud.hpp"
#include "homlift/rng.hpp"

namespace homlift {

enum class ShapeId { circle, lemniscate, torus_figure8, five_circles, custom };

inline const char* to_string(ShapeId id) {
  switch (id) {
    case ShapeId::circle: return "circle";
    case ShapeId::lemniscate: return "lemniscate";
    case ShapeId::torus_figure8: return "torus_figure8";
    case ShapeId::five_circles: return "five_circles";
    default: return "custom";
  }
}

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;
  double length() const { return hi - lo; }
};

/// A parametric immersed shape: eval maps parameters into R^n, jacobian gives
/// the n x d differential. Self-intersections of the image are allowed; the
/// Jacobian must have full column rank everywhere (immersion).
struct ParametricShape {
  ShapeId id = ShapeId::custom;
  int intrinsic_dim = 1;  // d, 1 or 2
  int ambient_dim = 2;    // n
  std::vector<Interval> domain;
  std::function<Vector(const Vector&)> eval;
  std::function<Matrix(const Vector&)> jacobian;

  /// Convenience for curves (d = 1).
  Vector eval_at(double t) const {
    Vector p(1);
    p[0] = t;
    return eval(p);
  }
  Matrix jacobian_at(double t) const {
    Vector p(1);
    p[0] = t;
    return jacobian(p);
  }
};

inline Vector make_param(double t) {
  Vector p(1);
  p[0] = t;
  return p;
}

inline Vector make_param(double a, double b) {
  Vector p(2);
  p[0] = a;
  p[1] = b;
  return p;
}

// ---------------------------------------------------------------------------
// Shape factories
// ---------------------------------------------------------------------------

inline ParametricShape make_circle(double radius) {
  if (radius <= 0.0) throw validation_error("make_circle: radius must be > 0");
  ParametricShape s;
  s.id = ShapeId::circle;
  s.intrinsic_dim = 1;
  s.ambient_dim = 2;
  s.domain = {{0.0, 2.0 * M_PI, true}};
  s.eval = [radius](const Vector& t) {
    Vector p(2);
    p << radius * std::cos(t[0]), radius * std::sin(t[0]);
    return p;
  };
  s.jacobian = [radius](const Vector& t) {
    Matrix j(2, 1);
    j << -radius * std::sin(t[0]), radius * std::cos(t[0]);
    return j;
  };
  return s;
}

/// Lemniscate of Bernoulli with diameter 2:
///   t -> (cos t, sin t cos t) / (1 + sin^2 t),  t in [0, 2pi).
/// Self-intersection at the origin for t = pi/2 and t = 3pi/2, where the two
/// branches cross at right angles.
inline ParametricShape make_lemniscate() {
  ParametricShape s;
  s.id = ShapeId::lemniscate;
  s.intrinsic_dim = 1;
  s.ambient_dim = 2;
  s.domain = {{0.0, 2.0 * M_PI, true}};
  s.eval = [](const Vector& t) {
    double c = std::cos(t[0]), sn = std::sin(t[0]);
    double den = 1.0 + sn * sn;
    Vector p(2);
    p << c / den, sn * c / den;
    return p;
  };
  s.jacobian = [](const Vector& t) {
    double c = std::cos(t[0]), sn = std::sin(t[0]);
    double den = 1.0 + sn * sn;
    double den2 = den * den;
    // x = c/den, y = s c/den with den = 1 + s^2
    double dx = (-sn * den - c * (2.0 * sn * c)) / den2;
    double dy = ((c * c - sn * sn) * den - sn * c * (2.0 * sn * c)) / den2;
    Matrix j(2, 1);
    j << dx, dy;
    return j;
  };
  return s;
}

/// Immersed torus in R^3: a figure-eight cross-section swept around a circle
/// of radius 2 while rotating in its own plane by the sweep angle (one full
/// twist per revolution). The cross-section double point traces the circle of
/// radius 2 in the z = 0 plane, which is the self-intersection locus.
inline ParametricShape make_figure8_torus() {
  constexpr double kRing = 2.0;
  constexpr double kScale = 0.6;
  ParametricShape s;
  s.id = ShapeId::torus_figure8;
  s.intrinsic_dim = 2;
  s.ambient_dim = 3;
  s.domain = {{0.0, 2.0 * M_PI, true}, {0.0, 2.0 * M_PI, true}};
  auto section = [](double theta) {
    Vector l(2);
    l << kScale * std::sin(theta) * std::cos(theta), kScale * std::sin(theta);
    return l;
  };
  auto section_d = [](double theta) {
    Vector l(2);
    l << kScale * std::cos(2.0 * theta), kScale * std::cos(theta);
    return l;
  };
  s.eval = [section](const Vector& p) {
    double theta = p[0], phi = p[1];
    Vector l = section(theta);
    double cph = std::cos(phi), sph = std::sin(phi);
    double c1 = cph * l[0] - sph * l[1];
    double c2 = sph * l[0] + cph * l[1];
    Vector out(3);
    out << (kRing + c1) * cph, (kRing + c1) * sph, c2;
    return out;
  };
  s.jacobian = [section, section_d](const Vector& p) {
    double theta = p[0], phi = p[1];
    Vector l = section(theta);
    Vector dl = section_d(theta);
    double cph = std::cos(phi), sph = std::sin(phi);
    double c1 = cph * l[0] - sph * l[1];
    double c2 = sph * l[0] + cph * l[1];
    double dc1_dth = cph * dl[0] - sph * dl[1];
    double dc2_dth = sph * dl[0] + cph * dl[1];
    // d/dphi of the rotated section: Rot'(phi) * l
    double dc1_dph = -sph * l[0] - cph * l[1];
    double dc2_dph = cph * l[0] - sph * l[1];
    Matrix j(3, 2);
    j(0, 0) = dc1_dth * cph;
    j(1, 0) = dc1_dth * sph;
    j(2, 0) = dc2_dth;
    j(0, 1) = dc1_dph * cph - (kRing + c1) * sph;
    j(1, 1) = dc1_dph * sph + (kRing + c1) * cph;
    j(2, 1) = dc2_dph;
    return j;
  };
  return s;
}

/// Union of five unit circles whose centers sit on a circle of radius 1.2,
/// so that adjacent circles intersect and non-adjacent ones do not. The
/// parameter t in [0, 10pi) selects circle floor(t / 2pi) at angle t mod 2pi.
/// The domain is flagged non-periodic: eval jumps between circles at
/// multiples of 2pi, while each circle closes on itself.
inline ParametricShape make_five_circles() {
  constexpr double kCenterRadius = 1.2;
  ParametricShape s;
  s.id = ShapeId::five_circles;
  s.intrinsic_dim = 1;
  s.ambient_dim = 2;
  s.domain = {{0.0, 10.0 * M_PI, false}};
  auto center = [](int k) {
    double a = 2.0 * M_PI * k / 5.0;
    Vector c(2);
    c << kCenterRadius * std::cos(a), kCenterRadius * std::sin(a);
    return c;
  };
  s.eval = [center](const Vector& t) {
    int k = std::min(4, static_cast<int>(std::floor(t[0] / (2.0 * M_PI))));
    double theta = t[0] - 2.0 * M_PI * k;
    Vector p = center(k);
    p[0] += std::cos(theta);
    p[1] += std::sin(theta);
    return p;
  };
  s.jacobian = [](const Vector& t) {
    int k = std::min(4, static_cast<int>(std::floor(t[0] / (2.0 * M_PI))));
    double theta = t[0] - 2.0 * M_PI * k;
    Matrix j(2, 1);
    j << -std::sin(theta), std::cos(theta);
    return j;
  };
  return s;
}

inline ParametricShape make_shape(ShapeId id) {
  switch (id) {
    case ShapeId::circle: return make_circle(1.0);
    case ShapeId::lemniscate: return make_lemniscate();
    case ShapeId::torus_figure8: return make_figure8_torus();
    case ShapeId::five_circles: return make_five_circles();
    default: throw validation_error("make_shape: custom shapes need explicit maps");
  }
}

// ---------------------------------------------------------------------------
// Tangent projections and exact lift
// ---------------------------------------------------------------------------

/// Orthogonal projection matrix onto the tangent space at parameter t:
/// p = J (J^T J)^{-1} J^T. Idempotent, symmetric, trace d.
inline Matrix tangent_projection(const ParametricShape& shape, const Vector& t) {
  Matrix j = shape.jacobian(t);
  Matrix gram = j.transpose() * j;  // d x d
  // Rank check: the immersion property requires full column rank.
  Eigen::SelfAdjointEigenSolver<Matrix> es(gram, Eigen::EigenvaluesOnly);
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  if (lo <= 0.0 || lo < 1e-12 * std::max(1.0, hi))
    throw immersion_error("tangent_projection: rank-deficient Jacobian");
  return j * gram.inverse() * j.transpose();
}

inline Matrix tangent_projection(const ParametricShape& shape, double t) {
  return tangent_projection(shape, make_param(t));
}

/// Support of the exact lifted measure sampled at the given parameters:
/// entry i = (eval(t_i), tangent_projection(t_i) / (d + 2)).
inline LiftedCloud exact_lift(const ParametricShape& shape,
                              const std::vector<Vector>& params) {
  LiftedCloud out;
  out.ambient_dim = shape.ambient_dim;
  out.intrinsic_dim_hint = shape.intrinsic_dim;
  double scale = 1.0 / (shape.intrinsic_dim + 2);
  for (const Vector& t : params)
    out.add(shape.eval(t), scale * tangent_projection(shape, t));
  return out;
}

// ---------------------------------------------------------------------------
// Sampling from the d-dimensional Hausdorff measure
// ---------------------------------------------------------------------------

struct SampleResult {
  PointCloud cloud;
  std::vector<Vector> params;
};

namespace detail {

/// Cumulative arc length of a curve on a uniform parameter grid
/// (trapezoid rule on the speed). Used both for inverse-CDF sampling and for
/// deterministic arc-length-uniform reference grids.
struct ArcLengthTable {
  double lo, hi;
  std::vector<double> cum;  // size panels+1, cum[0] = 0

  ArcLengthTable(const ParametricShape& shape, int panels = 1 << 16) {
    lo = shape.domain[0].lo;
    hi = shape.domain[0].hi;
    double dt = (hi - lo) / panels;
    cum.resize(panels + 1);
    cum[0] = 0.0;
    double prev = shape.jacobian_at(lo).col(0).norm();
    for (int i = 1; i <= panels; ++i) {
      double speed = shape.jacobian_at(lo + i * dt).col(0).norm();
      cum[i] = cum[i - 1] + 0.5 * (prev + speed) * dt;
      prev = speed;
    }
  }

  double total() const { return cum.back(); }

  /// Parameter t with arc length(lo..t) = u * total, u in [0, 1).
  double invert(double u) const {
    double target = u * total();
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t k = std::min<std::size_t>(cum.size() - 1,
                                          std::max<std::size_t>(1, it - cum.begin()));
    double seg = cum[k] - cum[k - 1];
    double frac = seg > 0.0 ? (target - cum[k - 1]) / seg : 0.0;
    double dt = (hi - lo) / (cum.size() - 1);
    return lo + (k - 1 + frac) * dt;
  }
};

}  // namespace detail

/// Deterministic arc-length-equispaced point set on a curve (d = 1 only).
/// Cell midpoints of the arc-length parametrization, so a shape made of
/// equal-length pieces gets the same number of points on each piece.
inline SampleResult sample_grid(const ParametricShape& shape, int count) {
  if (count < 1) throw validation_error("sample_grid: count must be >= 1");
  if (shape.intrinsic_dim != 1)
    throw validation_error("sample_grid: defined for curves (d = 1) only");
  SampleResult out;
  out.cloud.ambient_dim = shape.ambient_dim;
  detail::ArcLengthTable table(shape);
  for (int i = 0; i < count; ++i) {
    Vector t = make_param(table.invert((i + 0.5) / count));
    out.params.push_back(t);
    out.cloud.points.push_back(shape.eval(t));
  }
  return out;
}

/// Draws N points from the d-dimensional Hausdorff measure on the shape:
/// inverse-CDF on the numerically integrated speed for curves, area-element
/// rejection sampling for surfaces. Bit-reproducible for fixed
/// (shape, count, seed); the generator is SplitMix64.
inline SampleResult sample_uniform(const ParametricShape& shape, int count,
                                   std::uint64_t seed) {
  if (count < 1) throw validation_error("sample_uniform: count must be >= 1");
  SampleResult out;
  out.cloud.ambient_dim = shape.ambient_dim;
  out.cloud.points.reserve(count);
  out.params.reserve(count);
  SplitMix64 rng(seed);

  if (shape.intrinsic_dim == 1) {
    detail::ArcLengthTable table(shape);
    for (int i = 0; i < count; ++i) {
      Vector t = make_param(table.invert(rng.next_double()));
      out.params.push_back(t);
      out.cloud.points.push_back(shape.eval(t));
    }
    return out;
  }

  if (shape.intrinsic_dim != 2)
    throw validation_error("sample_uniform: intrinsic dimension must be 1 or 2");

  const Interval& du = shape.domain[0];
  const Interval& dv = shape.domain[1];
  auto area = [&shape](double u, double v) {
    Matrix j = shape.jacobian(make_param(u, v));
    Matrix gram = j.transpose() * j;
    double det = gram(0, 0) * gram(1, 1) - gram(0, 1) * gram(1, 0);
    return std::sqrt(std::max(0.0, det));
  };
  // Envelope for rejection sampling, from a fixed scan with safety margin.
  const int kScan = 256;
  double bound = 0.0;
  for (int i = 0; i < kScan; ++i)
    for (int k = 0; k < kScan; ++k)
      bound = std::max(bound, area(du.lo + (i + 0.5) / kScan * du.length(),
                                   dv.lo + (k + 0.5) / kScan * dv.length()));
  bound *= 1.2;
  for (int i = 0; i < count; ++i) {
    while (true) {
      double u = rng.uniform(du.lo, du.hi);
      double v = rng.uniform(dv.lo, dv.hi);
      if (rng.next_double() * bound <= area(u, v)) {
        Vector t = make_param(u, v);
        out.params.push_back(t);
        out.cloud.points.push_back(shape.eval(t));
        break;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Normal reach (curves only)
// ---------------------------------------------------------------------------

/// Computes the normal reach of a curve at given base parameters:
/// lambda(t0) = min |x - y| over points y != x with x - y orthogonal to the
/// tangent at y. Roots of s -> <x - gamma(s), gamma'(s)> are bracketed on a
/// dense parameter grid and refined by bisection. Building the solver caches
/// the curve grid, so batch queries against one shape are cheap.
class NormalReachSolver {
 public:
  explicit NormalReachSolver(const ParametricShape& shape, int grid_size = 4096)
      : shape_(shape), grid_size_(grid_size) {
    if (shape.intrinsic_dim != 1)
      throw validation_error("normal_reach: defined for curves (d = 1) only");
    lo_ = shape.domain[0].lo;
    hi_ = shape.domain[0].hi;
    periodic_ = shape.domain[0].periodic;
    pos_.resize(grid_size_);
    vel_.resize(grid_size_);
    double dt = (hi_ - lo_) / grid_size_;
    for (int i = 0; i < grid_size_; ++i) {
      double s = lo_ + i * dt;
      pos_[i] = shape.eval_at(s);
      vel_[i] = shape.jacobian_at(s).col(0);
    }
  }

  double value(double t0) const {
    Vector x = shape_.eval_at(t0);
    double dt = (hi_ - lo_) / grid_size_;
    auto g = [this, &x](double s) {
      return (x - shape_.eval_at(s)).dot(shape_.jacobian_at(s).col(0));
    };
    std::vector<double> grid_g(grid_size_);
    double gscale = 0.0;
    for (int i = 0; i < grid_size_; ++i) {
      grid_g[i] = (x - pos_[i]).dot(vel_[i]);
      gscale = std::max(gscale, std::abs(grid_g[i]));
    }
    int segments = periodic_ ? grid_size_ : grid_size_ - 1;
    double best = kInfinity;
    bool found_root = false;
    for (int i = 0; i < segments; ++i) {
      double a = lo_ + i * dt, b = lo_ + (i + 1) * dt;
      double ga = grid_g[i];
      double gb = (i + 1 < grid_size_) ? grid_g[i + 1] : grid_g[0];
      if (ga == 0.0) {
        consider(x, a, t0, g, gscale, best, found_root);
        continue;
      }
      if (ga * gb >= 0.0) continue;
      // Bisection to parameter tolerance 1e-10.
      double fa = ga;
      while (b - a > 1e-10) {
        double mid = 0.5 * (a + b);
        double fm = g(mid);
        if (fm == 0.0) {
          a = b = mid;
          break;
        }
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      consider(x, 0.5 * (a + b), t0, g, gscale, best, found_root);
    }
    if (!found_root)
      throw resolution_error(
          "normal_reach: no critical point bracketed; increase grid_size");
    // A second preimage of the base point shows up as a near-zero distance.
    if (best < 1e-8) return 0.0;
    return best;
  }

 private:
  template <typename G>
  void consider(const Vector& x, double s, double t0, G&& g, double gscale,
                double& best, bool& found_root) const {
    // Reject pseudo-roots caused by jumps of a piecewise eval.
    if (std::abs(g(s)) > 1e-6 * (1.0 + gscale)) return;
    if (param_distance(s, t0) <= 1e-6) return;
    found_root = true;
    best = std::min(best, (x - shape_.eval_at(s)).norm());
  }

  double param_distance(double a, double b) const {
    double d = std::abs(a - b);
    if (!periodic_) return d;
    double len = hi_ - lo_;
    d = std::fmod(d, len);
    return std::min(d, len - d);
  }

  const ParametricShape& shape_;
  int grid_size_;
  double lo_, hi_;
  bool periodic_;
  std::vector<Vector> pos_, vel_;
};

/// One-shot normal reach at parameter t0 (curves only). Returns 0 when the
/// base point has several preimages.
inline double normal_reach(const ParametricShape& shape, double t0,
                           int grid_size = 4096) {
  return NormalReachSolver(shape, grid_size).value(t0);
}

/// Arc-length fraction of the curve whose normal reach is <= radius,
/// estimated by grid quadrature with `grid` parameter cells.
inline double normal_reach_sublevel_fraction(const ParametricShape& shape,
                                             double radius, int grid) {
  if (grid < 1) throw validation_error("sublevel_fraction: grid must be >= 1");
  NormalReachSolver solver(shape);
  double lo = shape.domain[0].lo, hi = shape.domain[0].hi;
  double dt = (hi - lo) / grid;
  double total = 0.0, below = 0.0;
  for (int i = 0; i < grid; ++i) {
    double t = lo + (i + 0.5) * dt;
    double w = shape.jacobian_at(t).col(0).norm() * dt;
    total += w;
    if (solver.value(t) <= radius) below += w;
  }
  return total > 0.0 ? below / total : 0.0;
}

}  // namespace homlift
