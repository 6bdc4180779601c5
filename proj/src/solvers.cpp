#include "incdual/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

namespace incdual {

namespace {

Vector join(const Vector& a, const Vector& b) {
  Vector w(a.size() + b.size());
  w << a, b;
  return w;
}

// Projected compass search on a box of coordinate directions. Returns true
// when the step shrank below `tol` within the evaluation budget.
bool compass_search(Vector& z, double& fz, double h, double tol, const std::function<double(const Vector&)>& f,
                    const std::function<Vector(const Vector&)>& proj, bool maximize, long budget = 200000) {
  const double sign = maximize ? -1.0 : 1.0;
  long evals = 0;
  while (h >= tol) {
    bool improved = false;
    for (long i = 0; i < z.size() && evals < budget; ++i) {
      for (double dir : {1.0, -1.0}) {
        Vector trial = z;
        trial(i) += dir * h;
        trial = proj(trial);
        const double ft = f(trial);
        ++evals;
        if (sign * ft < sign * fz - 1e-15 * (1.0 + std::abs(fz))) {
          z = std::move(trial);
          fz = ft;
          improved = true;
          break;
        }
      }
    }
    if (evals >= budget) return false;
    if (!improved) h *= 0.5;
  }
  return true;
}

// Linear sensitivities of the semilinear recursion: x_t = S[t] z with
// z = (x_0, x_1, u_0, ..., u_{N-2}).
std::vector<Matrix> state_sensitivities(const SemilinearMap& F, int N) {
  const int n = F.n(), r = F.r();
  const long D = 2L * n + static_cast<long>(r) * (N - 1);
  std::vector<Matrix> S(N + 1, Matrix::Zero(n, D));
  S[0].block(0, 0, n, n).setIdentity();
  S[1].block(0, n, n, n).setIdentity();
  for (int t = 0; t + 2 <= N; ++t) {
    S[t + 2] = F.A0 * S[t] + F.A1 * S[t + 1];
    S[t + 2].block(0, 2L * n + static_cast<long>(r) * t, n, r) += F.B;
  }
  return S;
}

struct PrimalLayout {
  const DiscreteProblem& p;
  const SemilinearMap& F;
  int n, r, N;

  Vector project(const Vector& z) const {
    Vector out(z.size());
    out.segment(0, n) = p.Q0.project(z.segment(0, n)).point;
    out.segment(n, n) = p.Q1.project(z.segment(n, n)).point;
    for (int t = 0; t + 2 <= N; ++t) {
      const long off = 2L * n + static_cast<long>(r) * t;
      out.segment(off, r) = F.U.project(z.segment(off, r)).point;
    }
    return out;
  }

  Trajectory trajectory(const Vector& z) const {
    std::vector<Vector> controls;
    for (int t = 0; t + 2 <= N; ++t) controls.push_back(z.segment(2L * n + static_cast<long>(r) * t, r));
    return simulate(F, z.segment(0, n), z.segment(n, n), controls, 1e-8);
  }

  Vector random_point(std::mt19937_64& rng) const {
    Vector z(2L * n + static_cast<long>(r) * (N - 1));
    auto fill = [&](const ConvexSet& s, long off, long len) {
      auto [lo, hi] = s.bounds();
      for (long i = 0; i < len; ++i) {
        std::uniform_real_distribution<double> dist(lo(i), hi(i));
        z(off + i) = lo(i) == hi(i) ? lo(i) : dist(rng);
      }
    };
    fill(p.Q0, 0, n);
    fill(p.Q1, n, n);
    for (int t = 0; t + 2 <= N; ++t) fill(F.U, 2L * n + static_cast<long>(r) * t, r);
    return project(z);
  }
};

}  // namespace

void SolveOptions::validate() const {
  if (max_iter < 1) fail(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
  if (!(step0 > 0.0)) fail(ErrorCode::kInvalidArgument, "step0 must be > 0");
  if (!(tol > 0.0)) fail(ErrorCode::kInvalidArgument, "tol must be > 0");
  if (restarts < 0) fail(ErrorCode::kInvalidArgument, "restarts must be >= 0");
  if (grid_resolution < 1) fail(ErrorCode::kInvalidArgument, "grid resolution must be >= 1");
  if (!(dual_box > 0.0)) fail(ErrorCode::kInvalidArgument, "dual box must be > 0");
}

PrimalSolution solve_primal(const DiscreteProblem& p, const SolveOptions& opts) {
  p.validate();
  opts.validate();
  const SemilinearMap& F = p.semilinear();
  const PrimalLayout layout{p, F, p.n, p.r, p.N};
  const auto S = state_sensitivities(F, p.N);
  Matrix M(2L * p.n, S[0].cols());
  M << S[p.N - 1], S[p.N];

  auto objective = [&](const Vector& z) { return p.phi.value(M * z).value(); };

  std::mt19937_64 rng(opts.rng_seed);
  Vector best_z;
  double best_f = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool stationary = false;

  for (int restart = 0; restart <= opts.restarts; ++restart) {
    Vector z = restart == 0 ? layout.project(Vector::Zero(M.cols())) : layout.random_point(rng);
    for (int k = 1; k <= opts.max_iter; ++k) {
      ++iterations;
      const double fz = objective(z);
      if (fz < best_f) {
        best_f = fz;
        best_z = z;
      }
      const Vector g = M.transpose() * p.phi.subgradient(M * z);
      const Vector next = layout.project(z - (opts.step0 / std::sqrt(static_cast<double>(k))) * g);
      if ((next - z).norm() <= 1e-15 * (1.0 + z.norm())) {
        stationary = true;
        break;
      }
      z = next;
    }
    const double fz = objective(z);
    if (fz < best_f) {
      best_f = fz;
      best_z = z;
    }
  }

  bool polished = compass_search(
      best_z, best_f, 0.1 * opts.step0, opts.tol, objective, [&](const Vector& v) { return layout.project(v); }, false);

  PrimalSolution sol;
  sol.trajectory = layout.trajectory(best_z);
  sol.value = p.phi.value(join(sol.trajectory.states[p.N - 1], sol.trajectory.states[p.N]));
  sol.iterations = iterations;
  sol.converged = stationary || polished;
  return sol;
}

std::vector<Vector> set_grid(const ConvexSet& s, int resolution) {
  if (resolution < 1) fail(ErrorCode::kInvalidArgument, "grid resolution must be >= 1");
  if (const auto* sg = std::get_if<ConvexSet::Singleton>(&s.data())) return {sg->point};
  auto [lo, hi] = s.bounds();
  const long d = lo.size();
  std::vector<int> counts(d);
  double total = 1.0;
  for (long i = 0; i < d; ++i) {
    counts[i] = hi(i) > lo(i) ? resolution : 1;
    total *= counts[i];
  }
  if (total > static_cast<double>(kGridBudget)) fail(ErrorCode::kBudgetExceeded, "set grid exceeds 1e7 points");
  std::vector<Vector> out;
  std::vector<int> idx(d, 0);
  const bool is_box = std::holds_alternative<ConvexSet::Box>(s.data());
  while (true) {
    Vector v(d);
    for (long i = 0; i < d; ++i) {
      v(i) = counts[i] == 1 ? 0.5 * (lo(i) + hi(i))
                            : lo(i) + (hi(i) - lo(i)) * static_cast<double>(idx[i]) / (counts[i] - 1);
    }
    if (is_box || s.contains(v, 1e-12)) out.push_back(std::move(v));
    long a = 0;
    while (a < d && ++idx[a] == counts[a]) idx[a++] = 0;
    if (a == d) break;
  }
  if (const auto* b = std::get_if<ConvexSet::Ball>(&s.data())) out.push_back(b->center);
  if (const auto* pt = std::get_if<ConvexSet::Polytope>(&s.data())) {
    for (const auto& v : pt->vertices) out.push_back(v);
  }
  return out;
}

PrimalSolution brute_primal(const DiscreteProblem& p, const SolveOptions& opts) {
  p.validate();
  opts.validate();
  PrimalSolution best;
  best.value = ExtReal::plus_inf();
  const int N = p.N;

  if (const auto* F = std::get_if<SemilinearMap>(&p.map)) {
    const auto g0 = set_grid(p.Q0, opts.grid_resolution);
    const auto g1 = set_grid(p.Q1, opts.grid_resolution);
    const auto gu = set_grid(F->U, opts.grid_resolution);
    const double total = static_cast<double>(g0.size()) * static_cast<double>(g1.size()) *
                         std::pow(static_cast<double>(gu.size()), N - 1);
    if (total > static_cast<double>(kGridBudget)) {
      fail(ErrorCode::kBudgetExceeded, "brute_primal: " + std::to_string(static_cast<long long>(total)) +
                                           " grid points exceed the 1e7 budget; lower --grid or the horizon");
    }
    std::vector<Vector> states(N + 1);
    std::vector<std::size_t> choice(N - 1);
    long evaluated = 0;
    std::function<void(int)> descend = [&](int t) {
      if (t + 2 > N) {
        ++evaluated;
        const ExtReal v = p.phi.value(join(states[N - 1], states[N]));
        if (v < best.value) {
          best.value = v;
          std::vector<Vector> controls;
          for (int s = 0; s + 2 <= N; ++s) controls.push_back(gu[choice[s]]);
          best.trajectory = Trajectory{states, controls};
        }
        return;
      }
      for (std::size_t j = 0; j < gu.size(); ++j) {
        choice[t] = j;
        states[t + 2] = F->A0 * states[t] + F->A1 * states[t + 1] + F->B * gu[j];
        descend(t + 1);
      }
    };
    for (const auto& a : g0) {
      for (const auto& b : g1) {
        states[0] = a;
        states[1] = b;
        descend(0);
      }
    }
    best.iterations = static_cast<int>(std::min<long>(evaluated, std::numeric_limits<int>::max()));
    best.converged = best.value.is_finite();
    return best;
  }

  const auto& triples = std::get<TabulatedMap>(p.map).triples;
  std::vector<Vector> states(N + 1);
  long nodes = 0;
  std::function<void(int)> extend = [&](int t) {
    if (++nodes > static_cast<long>(kGridBudget)) fail(ErrorCode::kBudgetExceeded, "brute_primal: chain budget");
    if (t + 2 > N) {
      const ExtReal v = p.phi.value(join(states[N - 1], states[N]));
      if (v < best.value) {
        best.value = v;
        best.trajectory = Trajectory{states, {}};
      }
      return;
    }
    for (const auto& tr : triples) {
      if (approx_equal(tr.x, states[t]) && approx_equal(tr.y, states[t + 1])) {
        states[t + 2] = tr.z;
        extend(t + 1);
      }
    }
  };
  for (const auto& tr : triples) {
    if (!p.Q0.contains(tr.x) || !p.Q1.contains(tr.y)) continue;
    states[0] = tr.x;
    states[1] = tr.y;
    // The first triple is re-matched inside extend(0).
    extend(0);
  }
  best.iterations = static_cast<int>(std::min<long>(nodes, std::numeric_limits<int>::max()));
  best.converged = best.value.is_finite();
  return best;
}

std::vector<Vector> adjoint_recursion(const Matrix& A0, const Matrix& A1, const Vector& xstar_nm1,
                                      const Vector& xstar_n, int N) {
  if (N < 2) fail(ErrorCode::kInvalidArgument, "adjoint recursion needs N >= 2");
  require_dim(xstar_nm1.size(), A0.rows(), "adjoint seed");
  require_dim(xstar_n.size(), A0.rows(), "adjoint seed");
  std::vector<Vector> xs(N + 1);
  xs[N] = xstar_n;
  xs[N - 1] = xstar_nm1;
  for (int t = N - 2; t >= 0; --t) xs[t] = A0.transpose() * xs[t + 2] + A1.transpose() * xs[t + 1];
  return xs;
}

DualVariables dual_from_seed(const DiscreteProblem& p, const Vector& xstar_nm1, const Vector& xstar_n) {
  const auto& F = p.semilinear();
  DualVariables dv;
  dv.xstar = adjoint_recursion(F.A0, F.A1, xstar_nm1, xstar_n, p.N);
  dv.mustar.resize(p.N);
  for (int t = 0; t + 2 <= p.N; ++t) dv.mustar[t + 1] = F.A1.transpose() * dv.xstar[t + 2];
  dv.mustar[0] = dv.xstar[0] - F.A0.transpose() * dv.xstar[2];
  return dv;
}

namespace {

// Reduced dual in the coordinates q of the terminal conjugate argument.
struct ReducedDual {
  const DiscreteProblem& p;
  const SemilinearMap& F;
  const ConvexFn* base = nullptr;  // function whose conjugate is evaluated at q
  Matrix C;                        // q = C s
  Matrix C_inv;
  std::vector<Matrix> R;           // x*_t = R[t] s

  explicit ReducedDual(const DiscreteProblem& prob) : p(prob), F(prob.semilinear()) {
    const int n = p.n;
    const Matrix E = Matrix::Identity(n, n);
    Matrix T = Matrix::Zero(2 * n, 2 * n);
    T.block(0, 0, n, n) = -E;
    T.block(0, n, n, n) = F.A1.transpose();
    T.block(n, n, n, n) = -E;
    base = &p.phi;
    Matrix L = Matrix::Identity(2 * n, 2 * n);
    if (const auto* lift = std::get_if<ConvexFn::Lifted>(&p.phi.data())) {
      base = lift->base.get();
      L.block(0, n, n, n) = E;
      L.block(n, n, n, n) = lift->delta * E;
    }
    C = L * T;
    C_inv = C.inverse();
    R.assign(p.N + 1, Matrix::Zero(n, 2 * n));
    R[p.N - 1].block(0, 0, n, n) = E;
    R[p.N].block(0, n, n, n) = E;
    for (int t = p.N - 2; t >= 0; --t) R[t] = F.A0.transpose() * R[t + 2] + F.A1.transpose() * R[t + 1];
  }

  Vector seed(const Vector& q) const { return C_inv * q; }

  DualVariables variables(const Vector& q) const {
    const Vector s = seed(q);
    return dual_from_seed(p, s.head(p.n), s.tail(p.n));
  }

  double value(const Vector& q) const { return dual_objective(p, variables(q)).value(); }

  Vector project(const Vector& q) const { return base->project_conjugate_domain(q); }

  Vector supergradient(const Vector& q) const {
    const Vector s = seed(q);
    Vector gs = -C.transpose() * base->conjugate_subgradient(q);
    std::vector<Vector> xs(p.N + 1);
    for (int t = 0; t <= p.N; ++t) xs[t] = R[t] * s;
    for (int t = 0; t + 2 <= p.N; ++t) {
      gs -= R[t + 2].transpose() * (F.B * F.U.support_point(F.B.transpose() * xs[t + 2]));
    }
    gs -= R[2].transpose() * (F.A0 * p.Q0.support_point(F.A0.transpose() * xs[2]));
    gs -= R[1].transpose() * p.Q1.support_point(xs[1]);
    return C_inv.transpose() * gs;
  }
};

DualSolution make_dual_solution(const DualVariables& dv, double value, int iterations, bool converged) {
  DualSolution sol;
  sol.xstar = dv.xstar;
  sol.mustar = dv.mustar;
  sol.value = value;
  sol.iterations = iterations;
  sol.converged = converged;
  return sol;
}

}  // namespace

DualSolution solve_dual(const DiscreteProblem& p, const SolveOptions& opts) {
  p.validate();
  opts.validate();
  const ReducedDual rd(p);
  const long dim = 2L * p.n;

  std::mt19937_64 rng(opts.rng_seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  Vector best_q = rd.project(Vector::Zero(dim));
  double best_v = rd.value(best_q);
  int iterations = 0;
  bool stationary = false;

  for (int restart = 0; restart <= opts.restarts; ++restart) {
    Vector q(dim);
    if (restart == 0) {
      q.setZero();
    } else {
      for (long i = 0; i < dim; ++i) q(i) = opts.step0 * restart * unit(rng);
    }
    q = rd.project(q);
    for (int k = 1; k <= opts.max_iter; ++k) {
      ++iterations;
      const double v = rd.value(q);
      if (v > best_v) {
        best_v = v;
        best_q = q;
      }
      const Vector g = rd.supergradient(q);
      const Vector next = rd.project(q + (opts.step0 / std::sqrt(static_cast<double>(k))) * g);
      if ((next - q).norm() <= 1e-15 * (1.0 + q.norm())) {
        stationary = true;
        break;
      }
      q = next;
    }
    const double v = rd.value(q);
    if (v > best_v) {
      best_v = v;
      best_q = q;
    }
  }

  bool polished = false;
  if (std::isfinite(best_v)) {
    polished = compass_search(
        best_q, best_v, 0.1 * opts.step0, opts.tol, [&](const Vector& q) { return rd.value(q); },
        [&](const Vector& q) { return rd.project(q); }, true);
  }
  return make_dual_solution(rd.variables(best_q), best_v, iterations,
                            std::isfinite(best_v) && (stationary || polished));
}

DualSolution brute_dual(const DiscreteProblem& p, const SolveOptions& opts) {
  p.validate();
  opts.validate();
  p.semilinear();
  if (p.n > 2) fail(ErrorCode::kUnsupported, "brute_dual: seed grid limited to n <= 2");
  const long dim = 2L * p.n;
  const int res = opts.grid_resolution;
  if (std::pow(static_cast<double>(res), static_cast<double>(dim)) > static_cast<double>(kGridBudget)) {
    fail(ErrorCode::kBudgetExceeded, "brute_dual: seed grid exceeds the 1e7 budget; lower --grid");
  }

  Vector best_s;
  double best_v = -std::numeric_limits<double>::infinity();
  int evaluated = 0;
  auto scan = [&](const Vector& lo, const Vector& hi) {
    std::vector<int> idx(dim, 0);
    while (true) {
      Vector s(dim);
      for (long i = 0; i < dim; ++i) {
        s(i) = res == 1 ? 0.5 * (lo(i) + hi(i)) : lo(i) + (hi(i) - lo(i)) * static_cast<double>(idx[i]) / (res - 1);
      }
      const double v = dual_objective(p, dual_from_seed(p, s.head(p.n), s.tail(p.n))).value();
      ++evaluated;
      if (v > best_v || best_s.size() == 0) {
        if (v > best_v) best_v = v;
        if (best_s.size() == 0 || v >= best_v) best_s = s;
      }
      long a = 0;
      while (a < dim && ++idx[a] == res) idx[a++] = 0;
      if (a == dim) break;
    }
  };
  const Vector box = Vector::Constant(dim, opts.dual_box);
  scan(-box, box);
  if (opts.refine_dual && std::isfinite(best_v) && res > 1) {
    const double cell = 2.0 * opts.dual_box / (res - 1);
    const Vector c = best_s;
    scan(c.array() - cell, c.array() + cell);
  }
  const DualVariables dv = dual_from_seed(p, best_s.head(p.n), best_s.tail(p.n));
  return make_dual_solution(dv, best_v, evaluated, std::isfinite(best_v));
}

}  // namespace incdual
