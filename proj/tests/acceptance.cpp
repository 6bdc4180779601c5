// Exit gate: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>

#include "incdual/convex_kernel.hpp"
#include "incdual/report.hpp"
#include "incdual/solvers.hpp"
#include "test_util.hpp"

using namespace incdual;
using incdual::testing::random_vec;
using incdual::testing::scalar;
using incdual::testing::seq;
using incdual::testing::vec;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void check(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double cert_worst(const CertificateReport& r) {
  return std::max({r.el_residual_max(), r.trans_residual_max(), r.fenchel_terminal.value()});
}

PrimalSolution fixed_primal(const DiscreteProblem& p, const Vector& x0, const Vector& x1, std::vector<Vector> u) {
  PrimalSolution ps;
  ps.trajectory = simulate(p.semilinear(), x0, x1, u);
  Vector last(2 * p.n);
  last << ps.trajectory.states[p.N - 1], ps.trajectory.states[p.N];
  ps.value = p.phi.value(last);
  return ps;
}

TabulatedMap random_table(std::mt19937_64& rng, int count) {
  std::uniform_int_distribution<int> d(-3, 3);
  std::vector<GraphTriple> t;
  for (int i = 0; i < count; ++i) t.push_back({vec({d(rng) / 2.0}), vec({d(rng) / 2.0}), vec({d(rng) / 2.0})});
  return TabulatedMap(t);
}

GridDualVars random_barred(std::mt19937_64& rng, int K) {
  GridDualVars g;
  g.K = K;
  g.barred = true;
  for (int k = 0; k <= K; ++k) g.xstar.push_back(random_vec(rng, 1, 2));
  for (int k = 0; k < K; ++k) g.mustar.push_back(random_vec(rng, 1, 2));
  return g;
}

Outcome worked_instance() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const DiscreteProblem p = incdual::testing::worked_n2();
  const PrimalSolution ps = solve_primal(p);
  const DualSolution ds = solve_dual(p);
  const CertificateReport r = certify(p, ps, ds.variables());
  const double elapsed = seconds_since(t0);
  o.check(std::abs(ps.value.value() + 1) <= 1e-6, "primal " + num(ps.value.value()));
  o.check(std::abs(ds.value.value() + 1) <= 1e-6, "dual " + num(ds.value.value()));
  o.check(cert_worst(r) <= 1e-8, "residual " + num(cert_worst(r)));
  o.check(std::abs(r.gap.value()) <= 1e-6, "gap " + num(r.gap.value()));
  o.check(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  if (o.ok) o.detail = "alpha = alpha* = -1, runtime " + num(elapsed) + " s";
  return o;
}

Outcome quadratic_instance() {
  Outcome o;
  const DiscreteProblem p = incdual::testing::quadratic_n3();
  const double a = solve_primal(p).value.value(), d = solve_dual(p).value.value();
  o.check(std::abs(a) <= 1e-6, "primal " + num(a));
  o.check(std::abs(d) <= 1e-6, "dual " + num(d));
  const PrimalSolution ps = fixed_primal(p, vec({1}), vec({1}), {vec({-1}), vec({0})});
  o.check(certify(p, ps, dual_from_seed(p, vec({0}), vec({0}))).passed, "zero-seed certificate failed");
  if (o.ok) o.detail = "alpha = " + num(a) + ", alpha* = " + num(d);
  return o;
}

Outcome m_function_identity() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(3);
  double worst = 0;
  for (double delta : {1.0, 0.5, 0.25}) {
    for (int trial = 0; trial < 50; ++trial) {
      const InclusionMap T = random_table(rng, 6);
      const Vector a = random_vec(rng, 1, 2), b = random_vec(rng, 1, 2), c = random_vec(rng, 1, 2);
      worst = std::max(worst, std::abs(m_function(g_map(T, delta), a, b, c).value() -
                                       m_g_via_formula(T, delta, a, b, c).value()));
      const SemilinearMap F(scalar(random_vec(rng, 1)(0)), scalar(random_vec(rng, 1)(0)), scalar(1),
                            ConvexSet::box(vec({-1}), vec({1})));
      const auto G = std::get<SemilinearMap>(g_map(F, delta));
      const Vector z = random_vec(rng, 1, 2);
      const ExtReal lhs = m_function(G, G.A0.transpose() * z, G.A1.transpose() * z, z);
      const ExtReal rhs = m_g_via_formula(F, delta, G.A0.transpose() * z, G.A1.transpose() * z, z);
      o.check(lhs.is_finite() && rhs.is_finite(), "semilinear point off the finite domain");
      if (lhs.is_finite() && rhs.is_finite()) worst = std::max(worst, std::abs(lhs.value() - rhs.value()));
    }
  }
  const double elapsed = seconds_since(t0);
  o.check(worst <= 1e-9, "max deviation " + num(worst));
  o.check(elapsed < 10.0, "runtime " + num(elapsed) + " s");
  if (o.ok) o.detail = "max deviation " + num(worst) + " over 300 draws";
  return o;
}

Outcome conjugate_calculus() {
  Outcome o;
  const double step = 0.01;
  const GridSpec g{vec({-3}), vec({3}), 601};
  const ConvexFn f = ConvexFn::norm1(1), h = ConvexFn::norm2sq(1);
  std::vector<Vector> pts;
  std::vector<double> vals;
  for (const auto& u : g.points()) {
    pts.push_back(u);
    vals.push_back(infconv_numeric(f, h, u, g).value());
  }
  const ConvexFn conv = ConvexFn::sampled(pts, vals);
  const ConvexFn fs = sample(f, g), hs = sample(h, g);
  double worst_ic = 0;
  for (double p = -1; p <= 1; p += 0.05) {
    const double lhs = lf_numeric(conv, vec({p})).value();
    const double rhs = lf_numeric(fs, vec({p})).value() + lf_numeric(hs, vec({p})).value();
    worst_ic = std::max(worst_ic, std::abs(lhs - rhs));
  }
  // Lipschitz constant 3 on the grid, two sampled conjugates on the right.
  o.check(worst_ic <= 2 * 3 * step, "infconv conjugate deviation " + num(worst_ic));

  std::mt19937_64 rng(4);
  double worst_fy = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const ConvexFn fn = incdual::testing::random_fn(rng, 2);
    const Vector x = random_vec(rng, 2, 3.0);
    Vector p = random_vec(rng, 2, 3.0);
    if (trial % 2 == 0) p = fn.project_conjugate_domain(p);
    const ExtReal r = fenchel_residual(fn, x, p);
    if (r.is_finite()) worst_fy = std::min(worst_fy, r.value());
  }
  o.check(worst_fy >= -1e-12, "Fenchel-Young residual " + num(worst_fy));

  for (int trial = 0; trial < 200; ++trial) {
    const double delta = 1.0 / (2 + trial % 9);
    const Vector x = random_vec(rng, 2), y1 = random_vec(rng, 2), y2 = random_vec(rng, 2);
    const auto m1 = pascal_args(1, delta, {x, y1});
    const auto m2 = pascal_args(2, delta, {x, y1, y2});
    o.check(m1[0] == Vector(x + y1) && m1[1] == Vector(delta * y1), "order-1 Pascal mismatch");
    o.check(m2[0] == Vector(x + y1 + y2) && m2[1] == Vector(delta * (y1 + 2.0 * y2)) &&
                m2[2] == Vector(delta * delta * y2),
            "order-2 Pascal mismatch");
  }
  if (o.ok) o.detail = "infconv dev " + num(worst_ic) + ", min Fenchel-Young " + num(worst_fy);
  return o;
}

Outcome bridges() {
  Outcome o;
  std::mt19937_64 rng(5);
  double worst = 0, worst_ineq = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const double delta = trial % 2 ? 0.25 : 0.5;
    const int K = static_cast<int>(std::lround(1 / delta));
    const GridDualVars g = random_barred(rng, K);
    const InclusionMap T = random_table(rng, 5);
    for (int k = 0; k + 2 <= K; ++k) {
      const BridgePair m = m_term_bridge(T, delta, g, k);
      worst = std::max(worst, std::abs(m.lhs.value() - m.rhs.value()));
    }
    const BridgePair t = terminal_bridge(ConvexFn::norm2sq(2), delta, g);
    worst = std::max(worst, std::abs(t.lhs.value() - t.rhs.value()));
    const BridgePair s = support_bridge_check(incdual::testing::random_set(rng, 1),
                                              incdual::testing::random_set(rng, 1), delta, g);
    worst_ineq = std::min(worst_ineq, s.lhs.value() - s.rhs.value());
  }
  o.check(worst <= 1e-9, "route deviation " + num(worst));
  o.check(worst_ineq >= -1e-9, "support inequality violated by " + num(-worst_ineq));
  if (o.ok) o.detail = "route deviation " + num(worst) + ", support slack >= " + num(worst_ineq);
  return o;
}

Outcome double_integrator_sweep() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<MeshSpec> meshes = {MeshSpec(4), MeshSpec(8), MeshSpec(16), MeshSpec(32)};
  const SweepReport rep = cmd_sweep(incdual::testing::double_integrator(), meshes, {}, -0.5, 1e-6);
  const double elapsed = seconds_since(t0);
  o.check(rep.rows.size() == 4, "row count");
  for (const ReportRow& r : rep.rows) {
    const double delta = r.delta.value();
    o.check(r.error.empty(), "row error: " + r.error);
    if (!r.error.empty()) continue;
    const double a = r.primal.value();
    o.check(std::abs(a - incdual::testing::double_integrator_value(delta)) <= 1e-6,
            "primal " + num(a) + " at delta " + num(delta));
    o.check(r.gap.is_finite() && std::abs(r.gap.value()) <= 1e-6, "gap " + r.gap.str() + " at delta " + num(delta));
    o.check(std::abs(a + 0.5) <= 1.5 * delta, "limit bound at delta " + num(delta));
  }
  o.check(elapsed < 30.0, "runtime " + num(elapsed) + " s");
  if (o.ok) o.detail = "order " + num(rep.order.value_or(NAN)) + ", runtime " + num(elapsed) + " s";
  return o;
}

Outcome weak_duality() {
  Outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> horizon(2, 6), dim(1, 2);
  std::uniform_real_distribution<double> unit(-1, 1);
  double worst = -INFINITY;
  int finite = 0;
  for (int trial = 0; trial < 500; ++trial) {
    try {
      const int n = dim(rng), N = horizon(rng);
      const Vector ones = Vector::Ones(n);
      const DiscreteProblem p{n,
                              n,
                              N,
                              SemilinearMap(incdual::testing::random_mat(rng, n, n),
                                            incdual::testing::random_mat(rng, n, n),
                                            incdual::testing::random_mat(rng, n, n), ConvexSet::box(-ones, ones)),
                              incdual::testing::random_fn(rng, 2 * n),
                              ConvexSet::box(-ones, ones),
                              incdual::testing::random_set(rng, n)};
      std::vector<Vector> u;
      for (int t = 0; t + 2 <= N; ++t) u.push_back(random_vec(rng, n));
      const PrimalSolution ps = fixed_primal(p, random_vec(rng, n), p.Q1.project(random_vec(rng, n)).point, u);
      Vector xn1 = random_vec(rng, n, 2), xn = random_vec(rng, n, 2);
      if (trial % 2 == 0) {
        // Seed whose terminal conjugate argument (A1^T x*_N - x*_{N-1}, -x*_N) lies in dom phi*.
        const Vector q = p.phi.project_conjugate_domain(random_vec(rng, 2 * n, 2));
        xn = -q.tail(n);
        xn1 = p.semilinear().A1.transpose() * xn - q.head(n);
      }
      const DualVariables dv = dual_from_seed(p, xn1, xn);
      const ExtReal d = dual_objective(p, dv);
      if (d.is_finite()) {
        worst = std::max(worst, d.value() - ps.value.value());
        ++finite;
      }
      o.check(!d.is_plus_inf(), "dual objective +inf");
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
  }
  o.check(worst <= 1e-9, "dual exceeds primal by " + num(worst));
  if (o.ok) o.detail = "max dual - primal " + num(worst) + ", " + std::to_string(finite) + " of 500 duals finite";
  return o;
}

Outcome certificate_sensitivity() {
  Outcome o;
  struct Case {
    DiscreteProblem p;
    PrimalSolution ps;
    DualVariables dv;
  };
  const DiscreteProblem w = incdual::testing::worked_n2(), q = incdual::testing::quadratic_n3();
  const std::vector<Case> cases = {
      {w, fixed_primal(w, vec({0}), vec({0}), {vec({-1})}), {seq({-2, -1, -1}), seq({-1, -1})}},
      {q, fixed_primal(q, vec({1}), vec({1}), {vec({-1}), vec({0})}), {seq({0, 0, 0, 0}), seq({0, 0, 0})}}};
  int perturbations = 0;
  auto consistent = [&](const CertificateReport& r) { return !r.passed || std::abs(r.gap.value()) <= 1e-6; };
  for (const Case& c : cases) {
    const CertificateReport base = certify(c.p, c.ps, c.dv);
    o.check(base.passed && consistent(base), "unperturbed certificate failed");
    for (int which = 0; which < 2; ++which) {
      const std::size_t count = which == 0 ? c.dv.xstar.size() : c.dv.mustar.size();
      for (std::size_t i = 0; i < count; ++i) {
        for (double eps : {1e-2, -1e-2}) {
          DualVariables bumped = c.dv;
          (which == 0 ? bumped.xstar : bumped.mustar)[i](0) += eps;
          const CertificateReport r = certify(c.p, c.ps, bumped);
          o.check(!r.passed, std::string(which == 0 ? "x*" : "mu*") + "_" + std::to_string(i) + " perturbation passed");
          o.check(consistent(r), "PASS with gap " + r.gap.str());
          (which == 0 ? bumped.xstar : bumped.mustar)[i](0) -= eps;
          const CertificateReport restored = certify(c.p, c.ps, bumped);
          o.check(restored.passed && consistent(restored), "restored certificate failed");
          ++perturbations;
        }
      }
    }
  }
  if (o.ok) o.detail = std::to_string(perturbations) + " perturbations all FAIL, restorations PASS";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"worked scalar instance", worked_instance},
      {"quadratic instance", quadratic_instance},
      {"M-function identity under the G map", m_function_identity},
      {"conjugate calculus", conjugate_calculus},
      {"dual bridge identities", bridges},
      {"double integrator sweep", double_integrator_sweep},
      {"weak duality", weak_duality},
      {"certificate sensitivity", certificate_sensitivity},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out.ok = false;
      out.detail = std::string("exception: ") + e.what();
    }
    std::printf("criterion %zu %s: %s (%s)\n", i + 1, out.ok ? "PASS" : "FAIL", criteria[i].first, out.detail.c_str());
    failed += out.ok ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
