#include "incdual/discretization.hpp"

#include <cmath>

namespace incdual {

namespace {

Vector join(const Vector& a, const Vector& b) {
  Vector w(a.size() + b.size());
  w << a, b;
  return w;
}

void require_barred(const GridDualVars& g) {
  if (!g.barred) fail(ErrorCode::kInvalidArgument, "expected barred grid dual variables");
}

}  // namespace

void ContinuousProblem::validate() const {
  if (n <= 0) fail(ErrorCode::kInvalidArgument, "state dimension n must be positive");
  require_dim(map.n(), n, "continuous map state dimension");
  require_dim(map.r(), r, "continuous map control dimension");
  require_dim(phi.dim(), 2 * n, "terminal cost");
  require_dim(Q0.dim(), n, "Q0");
  require_dim(Q1.dim(), n, "Q1");
}

MeshSpec::MeshSpec(int K) : K_(K) {
  if (K < 2) fail(ErrorCode::kInvalidArgument, "mesh needs 1/delta >= 2");
}

std::optional<std::pair<std::int64_t, std::int64_t>> rational_approx(double x, std::int64_t max_den) {
  if (!std::isfinite(x)) return std::nullopt;
  std::int64_t h_prev = 1, h = static_cast<std::int64_t>(std::floor(x));
  std::int64_t k_prev = 0, k = 1;
  double frac = x - std::floor(x);
  const double tol = 1e-12 * std::max(1.0, std::abs(x));
  while (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) > tol) {
    if (frac < 1e-15) break;
    const double inv = 1.0 / frac;
    const auto a = static_cast<std::int64_t>(std::floor(inv));
    frac = inv - std::floor(inv);
    const std::int64_t h_next = a * h + h_prev;
    const std::int64_t k_next = a * k + k_prev;
    if (k_next > max_den) return std::nullopt;
    h_prev = h;
    k_prev = k;
    h = h_next;
    k = k_next;
  }
  if (std::abs(x - static_cast<double>(h) / static_cast<double>(k)) > tol) return std::nullopt;
  return std::pair{h, k};
}

MeshSpec MeshSpec::from_delta(double delta) {
  if (!(delta > 0.0 && delta <= 0.5)) fail(ErrorCode::kInvalidArgument, "delta must be 1/K with K >= 2");
  const auto frac = rational_approx(delta);
  if (!frac || frac->first != 1 || frac->second > std::numeric_limits<int>::max()) {
    fail(ErrorCode::kInvalidArgument, "delta must be 1/K with K >= 2");
  }
  return MeshSpec(static_cast<int>(frac->second));
}

std::uint64_t binomial(int n, int k) {
  if (n < 0 || n > 62) fail(ErrorCode::kInvalidArgument, "binomial: n out of range");
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t c = 1;
  for (int i = 1; i <= k; ++i) c = c * static_cast<std::uint64_t>(n - k + i) / static_cast<std::uint64_t>(i);
  return c;
}

PascalTransform::PascalTransform(int order, double delta) : order_(order), delta_(delta) {
  if (order < 1 || order > 20) fail(ErrorCode::kInvalidArgument, "Pascal transform order must be in [1, 20]");
  if (!(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "Pascal transform needs delta > 0");
  T_ = Matrix::Zero(order + 1, order + 1);
  double scale = 1.0;
  for (int j = 0; j <= order; ++j) {
    for (int i = j; i <= order; ++i) T_(j, i) = static_cast<double>(binomial(i, j)) * scale;
    scale *= delta;
  }
}

std::vector<Vector> PascalTransform::apply(const std::vector<Vector>& ystars) const {
  if (ystars.size() != static_cast<std::size_t>(order_) + 1) {
    fail(ErrorCode::kDimensionMismatch, "Pascal transform expects " + std::to_string(order_ + 1) + " blocks");
  }
  const auto n = ystars.front().size();
  for (const auto& y : ystars) require_dim(y.size(), n, "Pascal transform block");
  std::vector<Vector> out(ystars.size(), Vector::Zero(n));
  double scale = 1.0;
  for (int j = 0; j <= order_; ++j) {
    // Integer combination first, then a single delta^j scaling.
    Vector acc = Vector::Zero(n);
    for (int i = j; i <= order_; ++i) acc += static_cast<double>(binomial(i, j)) * ystars[i];
    out[j] = scale * acc;
    scale *= delta_;
  }
  return out;
}

void GridDualVars::validate(int n) const {
  if (K < 2) fail(ErrorCode::kInvalidArgument, "grid dual variables need K >= 2");
  if (xstar.size() != static_cast<std::size_t>(K) + 1) fail(ErrorCode::kDimensionMismatch, "x* grid needs K + 1 values");
  if ((barred || !mustar.empty()) && mustar.size() != static_cast<std::size_t>(K)) {
    fail(ErrorCode::kDimensionMismatch, "mu* grid needs K values");
  }
  if (!barred && vstar.size() != static_cast<std::size_t>(K)) {
    fail(ErrorCode::kDimensionMismatch, "v* grid needs K values");
  }
  for (const auto& v : xstar) require_dim(v.size(), n, "x* value");
  for (const auto& v : mustar) require_dim(v.size(), n, "mu* value");
  for (const auto& v : vstar) require_dim(v.size(), n, "v* value");
}

Vector forward_diff(const std::vector<Vector>& f, int k, double delta) { return (f.at(k + 1) - f.at(k)) / delta; }

Vector backward_diff(const std::vector<Vector>& f, int k, double delta) { return (f.at(k) - f.at(k - 1)) / delta; }

Vector second_diff(const std::vector<Vector>& f, int k, double delta) {
  return (forward_diff(f, k + 1, delta) - forward_diff(f, k, delta)) / delta;
}

InclusionMap g_map(const InclusionMap& F, double delta) {
  if (!(delta > 0.0)) fail(ErrorCode::kInvalidArgument, "g_map needs delta > 0");
  if (const auto* s = std::get_if<SemilinearMap>(&F)) {
    const Matrix E = Matrix::Identity(s->n(), s->n());
    return SemilinearMap(-E + delta * delta * s->A0 - delta * s->A1, 2.0 * E + delta * s->A1, delta * delta * s->B,
                         s->U);
  }
  std::vector<GraphTriple> out;
  for (const auto& t : std::get<TabulatedMap>(F).triples) {
    const Vector y = t.x + delta * t.y;
    out.push_back({t.x, y, 2.0 * y - t.x + delta * delta * t.z});
  }
  return TabulatedMap(std::move(out));
}

ExtReal m_g_via_formula(const InclusionMap& F, double delta, const Vector& xstar, const Vector& ystar,
                        const Vector& zstar) {
  const double d2 = delta * delta;
  return d2 * m_function(F, (xstar + ystar - zstar) / d2, (ystar - 2.0 * zstar) / delta, zstar);
}

ExtReal phi_lift_conjugate(const ConvexFn& phi, double delta, const Vector& xstar, const Vector& ystar) {
  require_dim(xstar.size() + ystar.size(), phi.dim(), "lifted conjugate argument");
  return phi.conjugate(join(xstar + ystar, delta * ystar));
}

std::vector<Vector> pascal_args(int order, double delta, const std::vector<Vector>& ystars) {
  return PascalTransform(order, delta).apply(ystars);
}

GridDualVars dual_bridge(const GridDualVars& barred, double delta) {
  require_barred(barred);
  if (barred.xstar.size() != static_cast<std::size_t>(barred.K) + 1 ||
      barred.mustar.size() != static_cast<std::size_t>(barred.K)) {
    fail(ErrorCode::kDimensionMismatch, "dual_bridge: grid length mismatch");
  }
  GridDualVars out;
  out.K = barred.K;
  out.barred = false;
  for (const auto& x : barred.xstar) out.xstar.push_back(delta * x);
  for (const auto& m : barred.mustar) out.mustar.push_back(delta * m);
  for (int k = 0; k < barred.K; ++k) out.vstar.push_back((out.mustar[k] - 2.0 * out.xstar[k + 1]) / delta);
  return out;
}

BridgePair m_term_bridge(const InclusionMap& F, double delta, const GridDualVars& barred, int k) {
  require_barred(barred);
  if (k < 0 || k > barred.K - 2) fail(ErrorCode::kInvalidArgument, "m_term_bridge: index out of range");
  const InclusionMap G = g_map(F, delta);
  const ExtReal lhs =
      m_function(G, barred.xstar[k] - barred.mustar[k], barred.mustar[k + 1], barred.xstar[k + 2]);
  const GridDualVars s = dual_bridge(barred, delta);
  const Vector first = second_diff(s.xstar, k, delta) + backward_diff(s.vstar, k + 1, delta);
  const ExtReal rhs = delta * m_function(F, first, s.vstar[k + 1], s.xstar[k + 2]);
  return {lhs, rhs};
}

BridgePair terminal_bridge(const ConvexFn& phi, double delta, const GridDualVars& barred) {
  require_barred(barred);
  const int K = barred.K;
  const ConvexFn lift = ConvexFn::lifted(phi, delta);
  const ExtReal lhs = lift.conjugate(join(barred.mustar[K - 1] - barred.xstar[K - 1], -barred.xstar[K]));
  const GridDualVars s = dual_bridge(barred, delta);
  const ExtReal rhs = phi.conjugate(join(s.vstar[K - 1] + backward_diff(s.xstar, K, delta), -s.xstar[K]));
  return {lhs, rhs};
}

ConvexSet first_step_set(const ConvexSet& Q0, const ConvexSet& Q1, double delta) {
  return ConvexSet::minkowski_sum(Q0, Q1.scaled(delta));
}

BridgePair support_bridge_check(const ConvexSet& Q0, const ConvexSet& Q1, double delta, const GridDualVars& barred) {
  require_barred(barred);
  require_dim(Q1.dim(), Q0.dim(), "Q1");
  auto w_hat = [&](const Vector& d) -> ExtReal {
    try {
      return first_step_set(Q0, Q1, delta).support(d);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kUnsupported) throw;
      return Q0.support(d) + delta * Q1.support(d);
    }
  };
  const ExtReal lhs = Q0.support(barred.xstar[0] - barred.mustar[0]) + w_hat(barred.xstar[1]);
  const GridDualVars s = dual_bridge(barred, delta);
  const ExtReal rhs = Q0.support(-s.vstar[0] - forward_diff(s.xstar, 0, delta)) + Q1.support(s.xstar[1]);
  return {lhs, rhs};
}

DiscreteProblem build_pda(const ContinuousProblem& cp, const MeshSpec& mesh) {
  cp.validate();
  const double delta = mesh.delta();
  DiscreteProblem p{cp.n,
                    cp.r,
                    mesh.K(),
                    g_map(cp.map, delta),
                    ConvexFn::lifted(cp.phi, delta),
                    cp.Q0,
                    first_step_set(cp.Q0, cp.Q1, delta)};
  p.validate();
  return p;
}

}  // namespace incdual
