#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "incdual/inclusion_model.hpp"

namespace incdual {

/// Continuous-time reading x'' = A0 x + A1 x' + B u, u in U, on [0, 1];
/// minimize phi(x(1), x'(1)) with x(0) in Q0, x'(0) in Q1.
struct ContinuousProblem {
  int n = 0;
  int r = 0;
  SemilinearMap map;
  ConvexFn phi;
  ConvexSet Q0, Q1;

  void validate() const;
};

/// Uniform mesh of [0, 1] with step 1/K. Stored as the integer K so that
/// grid index arithmetic is exact.
class MeshSpec {
 public:
  /// Requires K >= 2.
  explicit MeshSpec(int K);
  /// Accepts only exact unit fractions (continued-fraction recovery with
  /// denominators up to 1e6).
  static MeshSpec from_delta(double delta);

  int K() const { return K_; }
  double delta() const { return 1.0 / K_; }

 private:
  int K_;
};

/// Recovers p/q from x by continued fractions, q <= max_den. Returns
/// nullopt if no such fraction is within 1e-12 relative of x.
std::optional<std::pair<std::int64_t, std::int64_t>> rational_approx(double x, std::int64_t max_den = 1'000'000);

/// Upper-triangular T with T(j, i) = C(i, j) delta^j for i >= j.
class PascalTransform {
 public:
  PascalTransform(int order, double delta);
  int order() const { return order_; }
  const Matrix& matrix() const { return T_; }
  /// output_j = delta^j * sum_{i >= j} C(i, j) * input_i, blockwise on R^n.
  std::vector<Vector> apply(const std::vector<Vector>& ystars) const;

 private:
  int order_;
  double delta_;
  Matrix T_;
};

/// Exact binomial coefficient, n <= 62.
std::uint64_t binomial(int n, int k);

/// Grid dual variables on a mesh. Barred form: the G-form dual variables of
/// the discrete-approximate problem. Scaled form: x* = delta x-bar, mu* =
/// delta mu-bar, plus v*(t) = [mu*(t) - 2 x*(t + delta)] / delta.
struct GridDualVars {
  int K = 0;
  bool barred = true;
  std::vector<Vector> xstar;   // t = 0, delta, ..., 1      (K + 1 values)
  std::vector<Vector> mustar;  // t = 0, ..., 1 - delta     (K values)
  std::vector<Vector> vstar;   // scaled form only, t = 0, ..., 1 - delta

  void validate(int n) const;
};

/// Forward, backward, and second differences of a grid function at index k.
Vector forward_diff(const std::vector<Vector>& f, int k, double delta);
Vector backward_diff(const std::vector<Vector>& f, int k, double delta);
Vector second_diff(const std::vector<Vector>& f, int k, double delta);

/// G(x, y) = 2y - x + delta^2 F(x, (y - x) / delta).
InclusionMap g_map(const InclusionMap& F, double delta);

/// delta^2 M_F((x* + y* - z*) / delta^2, (y* - 2 z*) / delta, z*).
ExtReal m_g_via_formula(const InclusionMap& F, double delta, const Vector& xstar, const Vector& ystar,
                        const Vector& zstar);

/// Conjugate of Phi(x, y) = phi(x, (y - x) / delta): phi*(x* + y*, delta y*).
ExtReal phi_lift_conjugate(const ConvexFn& phi, double delta, const Vector& xstar, const Vector& ystar);

std::vector<Vector> pascal_args(int order, double delta, const std::vector<Vector>& ystars);

/// Barred -> scaled representation with v*.
GridDualVars dual_bridge(const GridDualVars& barred, double delta);

/// Both sides of the M-term identity at grid index k (0 <= k <= K - 2):
/// lhs = M_G(x-bar(k) - mu-bar(k), mu-bar(k+1), x-bar(k+2)),
/// rhs = delta M_F(D2 x*(k) + D- v*(k+1), v*(k+1), x*(k+2)).
struct BridgePair {
  ExtReal lhs, rhs;
};
BridgePair m_term_bridge(const InclusionMap& F, double delta, const GridDualVars& barred, int k);

/// lhs = Phi*(mu-bar(1-delta) - x-bar(1-delta), -x-bar(1)) evaluated directly,
/// rhs = phi*(v*(1-delta) + D- x*(1), -x*(1)).
BridgePair terminal_bridge(const ConvexFn& phi, double delta, const GridDualVars& barred);

/// lhs = W_Q0(x-bar(0) - mu-bar(0)) + W_Q1hat(x-bar(delta)),
/// rhs = W_Q0(-v*(0) - D x*(0)) + W_Q1(x*(delta)), with Q1hat = Q0 + delta Q1.
/// lhs >= rhs always.
BridgePair support_bridge_check(const ConvexSet& Q0, const ConvexSet& Q1, double delta, const GridDualVars& barred);

/// Q0 + delta Q1.
ConvexSet first_step_set(const ConvexSet& Q0, const ConvexSet& Q1, double delta);

/// Discrete-approximate problem on the mesh: horizon K, map G, terminal cost
/// Phi(x, y) = phi(x, (y - x) / delta), first-step set Q0 + delta Q1.
DiscreteProblem build_pda(const ContinuousProblem& cp, const MeshSpec& mesh);

}  // namespace incdual
