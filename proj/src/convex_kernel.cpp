#include "incdual/convex_kernel.hpp"

#include <cmath>

namespace incdual {

std::size_t GridSpec::size() const {
  if (count <= 0 || lower.size() == 0) return 0;
  double total = 1.0;
  for (long i = 0; i < lower.size(); ++i) total *= count;
  return total > 1e12 ? static_cast<std::size_t>(1e12) : static_cast<std::size_t>(total);
}

std::vector<Vector> GridSpec::points() const {
  require_dim(upper.size(), lower.size(), "grid upper bound");
  if (count <= 0 || lower.size() == 0) fail(ErrorCode::kInvalidArgument, "empty grid");
  if (size() > 10'000'000) fail(ErrorCode::kBudgetExceeded, "grid exceeds 1e7 points");
  const long d = lower.size();
  auto coord = [&](long axis, int k) {
    if (count == 1) return 0.5 * (lower(axis) + upper(axis));
    return lower(axis) + (upper(axis) - lower(axis)) * static_cast<double>(k) / (count - 1);
  };
  std::vector<Vector> out;
  out.reserve(size());
  std::vector<int> idx(d, 0);
  while (true) {
    Vector p(d);
    for (long a = 0; a < d; ++a) p(a) = coord(a, idx[a]);
    out.push_back(std::move(p));
    long a = 0;
    while (a < d && ++idx[a] == count) idx[a++] = 0;
    if (a == d) break;
  }
  return out;
}

ExtReal support(const ConvexSet& s, const Vector& d) { return s.support(d); }

Projection project(const ConvexSet& s, const Vector& x) { return s.project(x); }

ExtReal conjugate(const ConvexFn& f, const Vector& p) { return f.conjugate(p); }

ExtReal lf_numeric(const ConvexFn& sampled, const Vector& p) {
  const auto* s = std::get_if<ConvexFn::Sampled>(&sampled.data());
  if (s == nullptr) fail(ErrorCode::kInvalidArgument, "lf_numeric expects a sampled function");
  require_dim(p.size(), sampled.dim(), "lf_numeric argument");
  if (s->points.empty()) fail(ErrorCode::kInvalidArgument, "lf_numeric: empty grid");
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s->points.size(); ++i) best = std::max(best, s->points[i].dot(p) - s->values[i]);
  return best;
}

ExtReal infconv_numeric(const ConvexFn& f, const ConvexFn& g, const Vector& u, const GridSpec& grid) {
  require_dim(g.dim(), f.dim(), "infimal convolution operand");
  require_dim(u.size(), f.dim(), "infimal convolution argument");
  require_dim(grid.lower.size(), f.dim(), "infimal convolution grid");
  ExtReal best = ExtReal::plus_inf();
  for (const auto& u1 : grid.points()) {
    const ExtReal a = f.value(u1);
    if (a.is_plus_inf()) continue;
    const ExtReal b = g.value(u - u1);
    if (b.is_plus_inf()) continue;
    best = min(best, a + b);
  }
  return best;
}

ConvexFn sample(const ConvexFn& f, const GridSpec& grid) {
  require_dim(grid.lower.size(), f.dim(), "sampling grid");
  std::vector<Vector> pts;
  std::vector<double> vals;
  for (auto& p : grid.points()) {
    const ExtReal v = f.value(p);
    if (!v.is_finite()) continue;
    pts.push_back(std::move(p));
    vals.push_back(v.value());
  }
  return ConvexFn::sampled(std::move(pts), std::move(vals));
}

ExtReal fenchel_residual(const ConvexFn& f, const Vector& x, const Vector& p) {
  require_dim(p.size(), f.dim(), "fenchel residual dual point");
  const ExtReal fx = f.value(x);
  if (fx.is_plus_inf()) return ExtReal::plus_inf();
  const ExtReal fs = std::holds_alternative<ConvexFn::Sampled>(f.data()) ? lf_numeric(f, p) : f.conjugate(p);
  if (fs.is_plus_inf()) return ExtReal::plus_inf();
  return fx + fs - p.dot(x);
}

Vector subgradient(const ConvexFn& f, const Vector& x) {
  if (f.value(x).is_plus_inf()) fail(ErrorCode::kNotInDomain, "subgradient: point outside dom f");
  return f.subgradient(x);
}

ExtReal support_attainment_residual(const ConvexSet& s, const Vector& x, const Vector& d, double tol) {
  require_dim(x.size(), s.dim(), "support attainment point");
  if (s.project(x).distance > tol) fail(ErrorCode::kNotInDomain, "support attainment: point outside the set");
  return s.support(d) - d.dot(x);
}

}  // namespace incdual
