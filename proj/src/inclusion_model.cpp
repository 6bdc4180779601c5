#include "incdual/inclusion_model.hpp"

#include <cmath>

namespace incdual {

namespace {

bool matches(const GraphTriple& t, const Vector& x, const Vector& y) {
  return approx_equal(t.x, x) && approx_equal(t.y, y);
}

}  // namespace

SemilinearMap::SemilinearMap(Matrix a0, Matrix a1, Matrix b, ConvexSet u)
    : A0(std::move(a0)), A1(std::move(a1)), B(std::move(b)), U(std::move(u)) {
  const auto n = A0.rows();
  if (n == 0) fail(ErrorCode::kInvalidArgument, "semilinear map: empty state dimension");
  if (A0.cols() != n) fail(ErrorCode::kDimensionMismatch, "semilinear map: A0 must be square");
  if (A1.rows() != n || A1.cols() != n) fail(ErrorCode::kDimensionMismatch, "semilinear map: A1 must be n x n");
  if (B.rows() != n) fail(ErrorCode::kDimensionMismatch, "semilinear map: B must have n rows");
  require_dim(U.dim(), B.cols(), "semilinear map control set");
  if (!A0.allFinite() || !A1.allFinite() || !B.allFinite()) {
    fail(ErrorCode::kInvalidArgument, "semilinear map: non-finite matrix entry");
  }
}

TabulatedMap::TabulatedMap(std::vector<GraphTriple> t) : triples(std::move(t)) {
  if (triples.empty()) fail(ErrorCode::kInvalidArgument, "tabulated map: no triples");
  const auto n = triples.front().x.size();
  if (n == 0) fail(ErrorCode::kInvalidArgument, "tabulated map: empty dimension");
  for (const auto& tr : triples) {
    require_dim(tr.x.size(), n, "tabulated triple x");
    require_dim(tr.y.size(), n, "tabulated triple y");
    require_dim(tr.z.size(), n, "tabulated triple z");
  }
}

int state_dim(const InclusionMap& map) {
  return std::visit([](const auto& m) { return m.n(); }, map);
}

void DiscreteProblem::validate() const {
  if (N < 2) fail(ErrorCode::kInvalidArgument, "horizon N must be >= 2");
  if (n <= 0) fail(ErrorCode::kInvalidArgument, "state dimension n must be positive");
  require_dim(state_dim(map), n, "inclusion map state dimension");
  if (const auto* s = std::get_if<SemilinearMap>(&map)) require_dim(s->r(), r, "control dimension");
  require_dim(phi.dim(), 2 * n, "terminal cost");
  require_dim(Q0.dim(), n, "Q0");
  require_dim(Q1.dim(), n, "Q1");
}

const SemilinearMap& DiscreteProblem::semilinear() const {
  const auto* s = std::get_if<SemilinearMap>(&map);
  if (s == nullptr) fail(ErrorCode::kUnsupported, "operation requires a semilinear map");
  return *s;
}

ExtReal hamiltonian(const InclusionMap& map, const Vector& x, const Vector& y, const Vector& zstar) {
  const int n = state_dim(map);
  require_dim(x.size(), n, "hamiltonian x");
  require_dim(y.size(), n, "hamiltonian y");
  require_dim(zstar.size(), n, "hamiltonian z*");
  if (const auto* s = std::get_if<SemilinearMap>(&map)) {
    return (s->A0 * x + s->A1 * y).dot(zstar) + s->U.support(s->B.transpose() * zstar);
  }
  ExtReal best = ExtReal::minus_inf();
  for (const auto& t : std::get<TabulatedMap>(map).triples) {
    if (matches(t, x, y)) best = max(best, t.z.dot(zstar));
  }
  return best;
}

ExtReal m_function(const InclusionMap& map, const Vector& xstar, const Vector& ystar, const Vector& zstar) {
  const int n = state_dim(map);
  require_dim(xstar.size(), n, "M-function x*");
  require_dim(ystar.size(), n, "M-function y*");
  require_dim(zstar.size(), n, "M-function z*");
  if (const auto* s = std::get_if<SemilinearMap>(&map)) {
    if (!approx_equal(xstar, s->A0.transpose() * zstar) || !approx_equal(ystar, s->A1.transpose() * zstar)) {
      return ExtReal::minus_inf();
    }
    return -s->U.support(s->B.transpose() * zstar);
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : std::get<TabulatedMap>(map).triples) {
    best = std::min(best, t.x.dot(xstar) + t.y.dot(ystar) - t.z.dot(zstar));
  }
  return best;
}

Vector argmax_rep(const InclusionMap& map, const Vector& x, const Vector& y, const Vector& zstar) {
  const int n = state_dim(map);
  require_dim(x.size(), n, "argmax x");
  require_dim(y.size(), n, "argmax y");
  require_dim(zstar.size(), n, "argmax z*");
  if (const auto* s = std::get_if<SemilinearMap>(&map)) {
    return s->A0 * x + s->A1 * y + s->B * s->U.support_point(s->B.transpose() * zstar);
  }
  const GraphTriple* best = nullptr;
  for (const auto& t : std::get<TabulatedMap>(map).triples) {
    if (matches(t, x, y) && (best == nullptr || t.z.dot(zstar) > best->z.dot(zstar))) best = &t;
  }
  if (best == nullptr) fail(ErrorCode::kNotInDomain, "argmax_rep: F(x, y) is empty");
  return best->z;
}

Trajectory simulate(const SemilinearMap& map, const Vector& x0, const Vector& x1, const std::vector<Vector>& controls,
                    double tol) {
  require_dim(x0.size(), map.n(), "simulate x0");
  require_dim(x1.size(), map.n(), "simulate x1");
  if (controls.empty()) fail(ErrorCode::kInvalidArgument, "simulate: need at least one control");
  Trajectory traj;
  traj.states = {x0, x1};
  traj.controls = controls;
  for (std::size_t t = 0; t < controls.size(); ++t) {
    require_dim(controls[t].size(), map.r(), "simulate control");
    if (map.U.project(controls[t]).distance > tol) {
      fail(ErrorCode::kNotInDomain, "simulate: control u_" + std::to_string(t) + " outside U");
    }
    traj.states.push_back(map.A0 * traj.states[t] + map.A1 * traj.states[t + 1] + map.B * controls[t]);
  }
  return traj;
}

double feasibility_residual(const DiscreteProblem& p, const Trajectory& traj) {
  if (traj.states.size() != static_cast<std::size_t>(p.N) + 1) {
    fail(ErrorCode::kDimensionMismatch, "trajectory length must be N + 1");
  }
  double worst = std::max(p.Q0.project(traj.states[0]).distance, p.Q1.project(traj.states[1]).distance);
  if (const auto* s = std::get_if<SemilinearMap>(&p.map)) {
    if (traj.controls.size() != static_cast<std::size_t>(p.N) - 1) {
      fail(ErrorCode::kDimensionMismatch, "trajectory needs N - 1 controls");
    }
    for (int t = 0; t + 2 <= p.N; ++t) {
      const auto& u = traj.controls[t];
      worst = std::max(worst, s->U.project(u).distance);
      const Vector r = traj.states[t + 2] - s->A0 * traj.states[t] - s->A1 * traj.states[t + 1] - s->B * u;
      worst = std::max(worst, r.norm());
    }
    return worst;
  }
  for (int t = 0; t + 2 <= p.N; ++t) {
    double nearest = std::numeric_limits<double>::infinity();
    for (const auto& tr : std::get<TabulatedMap>(p.map).triples) {
      const double d = std::max({(tr.x - traj.states[t]).norm(), (tr.y - traj.states[t + 1]).norm(),
                                 (tr.z - traj.states[t + 2]).norm()});
      nearest = std::min(nearest, d);
    }
    worst = std::max(worst, nearest);
  }
  return worst;
}

}  // namespace incdual
