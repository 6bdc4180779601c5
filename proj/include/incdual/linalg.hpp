#pragma once

#include <Eigen/Dense>

namespace incdual {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Absolute tolerance for equality tests in conjugate and M-function dispatch.
inline constexpr double kEqTol = 1e-9;
/// Below this magnitude a direction component counts as a tie in argmax selection.
inline constexpr double kTieTol = 1e-12;

inline bool approx_equal(const Vector& a, const Vector& b, double tol = kEqTol) {
  return a.size() == b.size() && (a.size() == 0 || (a - b).lpNorm<Eigen::Infinity>() <= tol);
}

}  // namespace incdual
