#pragma once

#include <Eigen/Dense>
#include <limits>
#include <stdexcept>
#include <string>

namespace homlift {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Input violates a documented precondition (bad dimensions, weights, ranges...).
class validation_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Input exceeds the documented desk-scale limits of an exact algorithm.
/// Callers are expected to shrink the input, never to fall back to an
/// approximation silently.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A parametric map failed to be an immersion at a probed parameter
/// (rank-deficient Jacobian).
class immersion_error : public validation_error {
 public:
  using validation_error::validation_error;
};

/// A search grid was too coarse to isolate the feature it was looking for.
class resolution_error : public validation_error {
 public:
  using validation_error::validation_error;
};

/// Frobenius norm. Eigen's norm() on a matrix is already Frobenius; the alias
/// keeps call sites unambiguous.
inline double frobenius_norm(const Matrix& a) { return a.norm(); }

inline double frobenius_distance(const Matrix& a, const Matrix& b) {
  return (a - b).norm();
}

}  // namespace homlift
