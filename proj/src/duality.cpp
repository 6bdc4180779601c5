#include "incdual/duality.hpp"

#include <algorithm>
#include <cmath>

#include "incdual/convex_kernel.hpp"

namespace incdual {

namespace {

Vector join(const Vector& a, const Vector& b) {
  Vector w(a.size() + b.size());
  w << a, b;
  return w;
}

}  // namespace

void DualVariables::validate(int n, int N) const {
  if (xstar.size() != static_cast<std::size_t>(N) + 1) fail(ErrorCode::kDimensionMismatch, "x* needs N + 1 vectors");
  if (mustar.size() != static_cast<std::size_t>(N)) fail(ErrorCode::kDimensionMismatch, "mu* needs N vectors");
  for (const auto& v : xstar) require_dim(v.size(), n, "x* vector");
  for (const auto& v : mustar) require_dim(v.size(), n, "mu* vector");
}

double CertificateReport::el_residual_max() const {
  double m = 0.0;
  for (const auto& r : el_residuals) m = std::max({m, r.adjoint, r.momentum});
  for (double r : argmax_residuals) m = std::max(m, r);
  return m;
}

ExtReal dual_objective(const DiscreteProblem& p, const DualVariables& dv) {
  p.validate();
  dv.validate(p.n, p.N);
  const int N = p.N;
  const ExtReal terminal = p.phi.conjugate(join(dv.mustar[N - 1] - dv.xstar[N - 1], -dv.xstar[N]));
  if (terminal.is_plus_inf()) return ExtReal::minus_inf();
  ExtReal total = -terminal;
  for (int t = 0; t + 2 <= N; ++t) {
    const ExtReal m = m_function(p.map, dv.xstar[t] - dv.mustar[t], dv.mustar[t + 1], dv.xstar[t + 2]);
    if (m.is_minus_inf()) return ExtReal::minus_inf();
    total += m;
  }
  total -= p.Q0.support(dv.xstar[0] - dv.mustar[0]);
  total -= p.Q1.support(dv.xstar[1]);
  return total;
}

ExtReal dual_objective_da(const ContinuousProblem& cp, const MeshSpec& mesh, const GridDualVars& gv) {
  cp.validate();
  if (gv.K != mesh.K()) fail(ErrorCode::kDimensionMismatch, "grid dual variables do not match the mesh");
  const double delta = mesh.delta();
  const GridDualVars s = gv.barred ? dual_bridge(gv, delta) : gv;
  s.validate(cp.n);
  const int K = mesh.K();

  const ExtReal terminal = cp.phi.conjugate(join(s.vstar[K - 1] + backward_diff(s.xstar, K, delta), -s.xstar[K]));
  if (terminal.is_plus_inf()) return ExtReal::minus_inf();
  ExtReal total = -terminal;
  const InclusionMap F = cp.map;
  for (int k = 0; k + 2 <= K; ++k) {
    const Vector first = second_diff(s.xstar, k, delta) + backward_diff(s.vstar, k + 1, delta);
    const ExtReal m = m_function(F, first, s.vstar[k + 1], s.xstar[k + 2]);
    if (m.is_minus_inf()) return ExtReal::minus_inf();
    total += delta * m;
  }
  total -= cp.Q0.support(-s.vstar[0] - forward_diff(s.xstar, 0, delta));
  total -= cp.Q1.support(s.xstar[1]);
  return total;
}

GridDualVars to_grid(const DualVariables& dv) {
  GridDualVars g;
  g.K = static_cast<int>(dv.mustar.size());
  g.barred = true;
  g.xstar = dv.xstar;
  g.mustar = dv.mustar;
  return g;
}

DualVariables from_grid(const GridDualVars& gv) {
  if (!gv.barred) fail(ErrorCode::kInvalidArgument, "from_grid expects barred variables");
  return DualVariables{gv.xstar, gv.mustar};
}

CertificateReport certify(const DiscreteProblem& p, const PrimalSolution& ps, const DualVariables& dv, double tol) {
  p.validate();
  dv.validate(p.n, p.N);
  const auto& F = p.semilinear();
  const auto& x = ps.trajectory.states;
  const double infeasibility = feasibility_residual(p, ps.trajectory);
  if (infeasibility > 1e-8) {
    fail(ErrorCode::kNotInDomain, "certify: primal trajectory is infeasible (residual " +
                                      std::to_string(infeasibility) + ")");
  }
  const int N = p.N;
  CertificateReport rep;
  rep.tol = tol;
  for (int t = 0; t + 2 <= N; ++t) {
    const Vector& zs = dv.xstar[t + 2];
    rep.el_residuals.push_back({(dv.xstar[t] - dv.mustar[t] - F.A0.transpose() * zs).norm(),
                                (dv.mustar[t + 1] - F.A1.transpose() * zs).norm()});
    const ExtReal h = hamiltonian(p.map, x[t], x[t + 1], zs);
    rep.argmax_residuals.push_back(std::max(0.0, (h - x[t + 2].dot(zs)).value()));
  }
  rep.trans0 = std::max(0.0, support_attainment_residual(p.Q0, x[0], dv.xstar[0] - dv.mustar[0]).value());
  rep.trans1 = std::max(0.0, support_attainment_residual(p.Q1, x[1], dv.xstar[1]).value());
  const ExtReal fr =
      fenchel_residual(p.phi, join(x[N - 1], x[N]), join(dv.mustar[N - 1] - dv.xstar[N - 1], -dv.xstar[N]));
  rep.fenchel_terminal = fr.is_finite() ? ExtReal(std::max(0.0, fr.value())) : fr;

  rep.primal_value = p.phi.value(join(x[N - 1], x[N]));
  rep.dual_value = dual_objective(p, dv);
  rep.gap = rep.primal_value - rep.dual_value;

  const double bound = rep.primal_value.is_finite() ? tol * (1.0 + std::abs(rep.primal_value.value())) : tol;
  rep.passed = rep.el_residual_max() <= bound && rep.trans_residual_max() <= bound &&
               rep.fenchel_terminal <= ExtReal(bound);
  return rep;
}

ExtReal weak_duality_gap(const DiscreteProblem& p, const PrimalSolution& ps, const DualVariables& dv) {
  if (feasibility_residual(p, ps.trajectory) > 1e-8) {
    fail(ErrorCode::kNotInDomain, "weak_duality_gap: primal trajectory is infeasible");
  }
  return ps.value - dual_objective(p, dv);
}

ProbeStatus NondegeneracyReport::overall() const {
  ProbeStatus worst = ProbeStatus::kPass;
  for (const auto& it : items) worst = std::max(worst, it.status);
  return worst;
}

const char* to_string(ProbeStatus s) {
  switch (s) {
    case ProbeStatus::kPass:
      return "PASS";
    case ProbeStatus::kWarn:
      return "WARN";
    case ProbeStatus::kFail:
      return "FAIL";
  }
  return "?";
}

NondegeneracyReport nondegeneracy_probe(const DiscreteProblem& p) {
  p.validate();
  const auto& F = p.semilinear();
  NondegeneracyReport rep;
  const bool u_int = F.U.has_interior();
  rep.items.push_back({"U interior", u_int ? ProbeStatus::kPass : ProbeStatus::kFail,
                       u_int ? "U has nonempty interior" : "U has empty interior, so int gph F is empty"});
  Eigen::FullPivLU<Matrix> lu(F.B);
  lu.setThreshold(1e-12);
  const bool full_rank = lu.rank() == F.n();
  rep.items.push_back({"B row rank", full_rank ? ProbeStatus::kPass : ProbeStatus::kFail,
                       "rank(B) = " + std::to_string(lu.rank()) + ", n = " + std::to_string(F.n())});
  auto set_item = [&](const char* name, const ConvexSet& q) {
    if (q.has_interior()) {
      rep.items.push_back({name, ProbeStatus::kPass, q.kind() + " has nonempty interior"});
    } else {
      rep.items.push_back({name, ProbeStatus::kWarn,
                           q.kind() + " has empty interior; the relative-interior case is not decided"});
    }
  };
  set_item("Q0 interior", p.Q0);
  set_item("Q1 interior", p.Q1);
  return rep;
}

}  // namespace incdual
