#pragma once

#include <string>
#include <vector>

#include "incdual/discretization.hpp"
#include "incdual/inclusion_model.hpp"

namespace incdual {

/// Dual variables x*_0 .. x*_N and mu*_0 .. mu*_{N-1}; not required to lie
/// on the adjoint subspace.
struct DualVariables {
  std::vector<Vector> xstar;
  std::vector<Vector> mustar;

  void validate(int n, int N) const;
};

struct PrimalSolution {
  Trajectory trajectory;
  ExtReal value = ExtReal::plus_inf();
  int iterations = 0;
  bool converged = false;
};

struct CertificateReport {
  struct ElResidual {
    double adjoint;  // |x*_t - mu*_t - A0^T x*_{t+2}|
    double momentum; // |mu*_{t+1} - A1^T x*_{t+2}|
  };
  std::vector<ElResidual> el_residuals;
  /// H_F(x_t, x_{t+1}, x*_{t+2}) - <x_{t+2}, x*_{t+2}>, per t.
  std::vector<double> argmax_residuals;
  double trans0 = 0.0;
  double trans1 = 0.0;
  ExtReal fenchel_terminal = 0.0;
  ExtReal primal_value = 0.0;
  ExtReal dual_value = 0.0;
  ExtReal gap = 0.0;
  double tol = 0.0;
  bool passed = false;

  /// Largest Euler-Lagrange residual, argmax-membership gaps included.
  double el_residual_max() const;
  double trans_residual_max() const { return std::max(trans0, trans1); }
};

/// Dual objective of the discrete problem, -inf whenever a conjugate or
/// M-function term is infeasible.
ExtReal dual_objective(const DiscreteProblem& p, const DualVariables& dv);

/// The same dual written with difference quotients on the mesh. Accepts
/// barred or scaled grid variables (barred ones are converted first).
ExtReal dual_objective_da(const ContinuousProblem& cp, const MeshSpec& mesh, const GridDualVars& gv);

/// Barred grid variables of the G-form problem <-> discrete dual variables.
GridDualVars to_grid(const DualVariables& dv);
DualVariables from_grid(const GridDualVars& gv);

inline constexpr double kDefaultCertTol = 1e-8;

/// Euler-Lagrange, transversality, and terminal Fenchel residuals plus the
/// duality gap for a semilinear problem. Passes when every residual is at
/// most tol * (1 + |primal value|).
CertificateReport certify(const DiscreteProblem& p, const PrimalSolution& ps, const DualVariables& dv,
                          double tol = kDefaultCertTol);

/// ps.value - dual_objective(p, dv).
ExtReal weak_duality_gap(const DiscreteProblem& p, const PrimalSolution& ps, const DualVariables& dv);

enum class ProbeStatus { kPass, kWarn, kFail };

struct ProbeItem {
  std::string name;
  ProbeStatus status;
  std::string message;
};

struct NondegeneracyReport {
  std::vector<ProbeItem> items;
  ProbeStatus overall() const;
};

/// Interior-point qualification checks for semilinear problems.
NondegeneracyReport nondegeneracy_probe(const DiscreteProblem& p);

const char* to_string(ProbeStatus s);

}  // namespace incdual
