#include "incdual/convex_set.hpp"

#include <algorithm>
#include <cmath>

namespace incdual {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void require_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) fail(ErrorCode::kInvalidArgument, std::string(what) + ": non-finite entry");
}

std::vector<Vector> box_vertices(const ConvexSet::Box& b) {
  const auto n = b.lower.size();
  if (n > 12) fail(ErrorCode::kUnsupported, "box with more than 12 coordinates has too many vertices");
  std::vector<Vector> out;
  for (long mask = 0; mask < (1L << n); ++mask) {
    Vector v(n);
    for (long i = 0; i < n; ++i) v(i) = (mask >> i) & 1 ? b.upper(i) : b.lower(i);
    out.push_back(std::move(v));
  }
  return out;
}

}  // namespace

ConvexSet ConvexSet::box(Vector lower, Vector upper) {
  if (lower.size() == 0) fail(ErrorCode::kInvalidArgument, "box: empty dimension");
  require_dim(upper.size(), lower.size(), "box upper bound");
  require_finite(lower, "box lower");
  require_finite(upper, "box upper");
  for (long i = 0; i < lower.size(); ++i) {
    if (lower(i) > upper(i)) fail(ErrorCode::kInvalidArgument, "box: lower > upper in coordinate " + std::to_string(i));
  }
  const int n = static_cast<int>(lower.size());
  return ConvexSet(Box{std::move(lower), std::move(upper)}, n);
}

ConvexSet ConvexSet::ball(Vector center, double radius) {
  if (center.size() == 0) fail(ErrorCode::kInvalidArgument, "ball: empty dimension");
  require_finite(center, "ball center");
  if (!(radius >= 0.0) || !std::isfinite(radius)) fail(ErrorCode::kInvalidArgument, "ball: radius must be >= 0");
  const int n = static_cast<int>(center.size());
  return ConvexSet(Ball{std::move(center), radius}, n);
}

ConvexSet ConvexSet::polytope(std::vector<Vector> vertices) {
  if (vertices.empty()) fail(ErrorCode::kInvalidArgument, "polytope: vertex list is empty");
  const auto n = vertices.front().size();
  if (n == 0) fail(ErrorCode::kInvalidArgument, "polytope: empty dimension");
  for (const auto& v : vertices) {
    require_dim(v.size(), n, "polytope vertex");
    require_finite(v, "polytope vertex");
  }
  return ConvexSet(Polytope{std::move(vertices)}, static_cast<int>(n));
}

ConvexSet ConvexSet::singleton(Vector point) {
  if (point.size() == 0) fail(ErrorCode::kInvalidArgument, "singleton: empty dimension");
  require_finite(point, "singleton");
  const int n = static_cast<int>(point.size());
  return ConvexSet(Singleton{std::move(point)}, n);
}

std::string ConvexSet::kind() const {
  return std::visit(overloaded{[](const Box&) { return "box"; }, [](const Ball&) { return "ball"; },
                               [](const Polytope&) { return "polytope"; },
                               [](const Singleton&) { return "singleton"; }},
                    data_);
}

double ConvexSet::support(const Vector& d) const {
  require_dim(d.size(), dim_, "support direction");
  return std::visit(overloaded{
                        [&](const Box& b) {
                          double s = 0.0;
                          for (long i = 0; i < d.size(); ++i) s += d(i) >= 0 ? d(i) * b.upper(i) : d(i) * b.lower(i);
                          return s;
                        },
                        [&](const Ball& b) { return b.center.dot(d) + b.radius * d.norm(); },
                        [&](const Polytope& p) {
                          double best = -std::numeric_limits<double>::infinity();
                          for (const auto& v : p.vertices) best = std::max(best, v.dot(d));
                          return best;
                        },
                        [&](const Singleton& s) { return s.point.dot(d); },
                    },
                    data_);
}

Vector ConvexSet::support_point(const Vector& d) const {
  require_dim(d.size(), dim_, "support direction");
  return std::visit(overloaded{
                        [&](const Box& b) {
                          Vector u(d.size());
                          for (long i = 0; i < d.size(); ++i) {
                            if (d(i) > kTieTol) {
                              u(i) = b.upper(i);
                            } else if (d(i) < -kTieTol) {
                              u(i) = b.lower(i);
                            } else {
                              u(i) = std::clamp(0.0, b.lower(i), b.upper(i));
                            }
                          }
                          return u;
                        },
                        [&](const Ball& b) -> Vector {
                          const double nd = d.norm();
                          if (nd <= kTieTol) return b.center;
                          return b.center + (b.radius / nd) * d;
                        },
                        [&](const Polytope& p) -> Vector {
                          std::size_t best = 0;
                          for (std::size_t i = 1; i < p.vertices.size(); ++i) {
                            if (p.vertices[i].dot(d) > p.vertices[best].dot(d) + kTieTol) best = i;
                          }
                          return p.vertices[best];
                        },
                        [&](const Singleton& s) -> Vector { return s.point; },
                    },
                    data_);
}

Projection ConvexSet::project(const Vector& x) const {
  require_dim(x.size(), dim_, "projection point");
  Vector p = std::visit(overloaded{
                            [&](const Box& b) -> Vector { return x.cwiseMax(b.lower).cwiseMin(b.upper); },
                            [&](const Ball& b) -> Vector {
                              const Vector r = x - b.center;
                              const double nr = r.norm();
                              if (nr <= b.radius) return x;
                              return b.center + (b.radius / nr) * r;
                            },
                            [&](const Polytope& p) -> Vector {
                              std::vector<Vector> shifted;
                              shifted.reserve(p.vertices.size());
                              for (const auto& v : p.vertices) shifted.push_back(v - x);
                              return x + min_norm_point_in_hull(shifted);
                            },
                            [&](const Singleton& s) -> Vector { return s.point; },
                        },
                        data_);
  const double dist = (p - x).norm();
  return {std::move(p), dist};
}

std::pair<Vector, Vector> ConvexSet::bounds() const {
  return std::visit(overloaded{
                        [](const Box& b) { return std::pair{b.lower, b.upper}; },
                        [](const Ball& b) {
                          const Vector r = Vector::Constant(b.center.size(), b.radius);
                          return std::pair<Vector, Vector>{b.center - r, b.center + r};
                        },
                        [](const Polytope& p) {
                          Vector lo = p.vertices.front(), hi = p.vertices.front();
                          for (const auto& v : p.vertices) {
                            lo = lo.cwiseMin(v);
                            hi = hi.cwiseMax(v);
                          }
                          return std::pair{lo, hi};
                        },
                        [](const Singleton& s) { return std::pair{s.point, s.point}; },
                    },
                    data_);
}

bool ConvexSet::has_interior() const {
  return std::visit(overloaded{
                        [](const Box& b) { return ((b.upper - b.lower).array() > 0.0).all(); },
                        [](const Ball& b) { return b.radius > 0.0; },
                        [&](const Polytope& p) {
                          if (p.vertices.size() < static_cast<std::size_t>(dim_) + 1) return false;
                          Matrix diffs(dim_, static_cast<long>(p.vertices.size()) - 1);
                          for (std::size_t i = 1; i < p.vertices.size(); ++i) {
                            diffs.col(static_cast<long>(i) - 1) = p.vertices[i] - p.vertices[0];
                          }
                          Eigen::FullPivLU<Matrix> lu(diffs);
                          lu.setThreshold(1e-12);
                          return lu.rank() == dim_;
                        },
                        [](const Singleton&) { return false; },
                    },
                    data_);
}

ConvexSet ConvexSet::scaled(double s) const {
  if (!(s >= 0.0) || !std::isfinite(s)) fail(ErrorCode::kInvalidArgument, "set scaling factor must be >= 0");
  return std::visit(overloaded{
                        [&](const Box& b) { return box(s * b.lower, s * b.upper); },
                        [&](const Ball& b) { return ball(s * b.center, s * b.radius); },
                        [&](const Polytope& p) {
                          std::vector<Vector> vs;
                          for (const auto& v : p.vertices) vs.push_back(s * v);
                          return polytope(std::move(vs));
                        },
                        [&](const Singleton& p) { return singleton(s * p.point); },
                    },
                    data_);
}

ConvexSet ConvexSet::minkowski_sum(const ConvexSet& a, const ConvexSet& b) {
  require_dim(b.dim(), a.dim(), "Minkowski sum operand");
  if (const auto* s = std::get_if<Singleton>(&b.data_)) {
    return std::visit(overloaded{
                          [&](const Box& x) { return box(x.lower + s->point, x.upper + s->point); },
                          [&](const Ball& x) { return ball(x.center + s->point, x.radius); },
                          [&](const Polytope& x) {
                            std::vector<Vector> vs;
                            for (const auto& v : x.vertices) vs.push_back(v + s->point);
                            return polytope(std::move(vs));
                          },
                          [&](const Singleton& x) { return singleton(x.point + s->point); },
                      },
                      a.data_);
  }
  if (std::holds_alternative<Singleton>(a.data_)) return minkowski_sum(b, a);

  if (const auto* x = std::get_if<Box>(&a.data_)) {
    if (const auto* y = std::get_if<Box>(&b.data_)) return box(x->lower + y->lower, x->upper + y->upper);
  }
  if (const auto* x = std::get_if<Ball>(&a.data_)) {
    if (const auto* y = std::get_if<Ball>(&b.data_)) return ball(x->center + y->center, x->radius + y->radius);
  }
  auto vertices_of = [](const ConvexSet& s) -> std::vector<Vector> {
    if (const auto* bx = std::get_if<Box>(&s.data_)) return box_vertices(*bx);
    if (const auto* p = std::get_if<Polytope>(&s.data_)) return p->vertices;
    fail(ErrorCode::kUnsupported, "Minkowski sum of a ball with a box or polytope is not representable");
  };
  const auto va = vertices_of(a);
  const auto vb = vertices_of(b);
  std::vector<Vector> sum;
  sum.reserve(va.size() * vb.size());
  for (const auto& u : va) {
    for (const auto& v : vb) sum.push_back(u + v);
  }
  return polytope(std::move(sum));
}

Vector min_norm_point_in_hull(const std::vector<Vector>& points, std::vector<double>* weights) {
  if (points.empty()) fail(ErrorCode::kInvalidArgument, "min-norm point of an empty hull");
  const std::size_t m = points.size();
  double scale = 0.0;
  for (const auto& p : points) scale = std::max(scale, p.squaredNorm());
  const double eps = 1e-14 * std::max(scale, 1.0);

  std::size_t start = 0;
  for (std::size_t i = 1; i < m; ++i) {
    if (points[i].squaredNorm() < points[start].squaredNorm()) start = i;
  }
  std::vector<std::size_t> active{start};
  std::vector<double> lambda{1.0};
  Vector x = points[start];

  auto combine = [&](const std::vector<double>& w) {
    Vector out = Vector::Zero(x.size());
    for (std::size_t k = 0; k < active.size(); ++k) out += w[k] * points[active[k]];
    return out;
  };

  for (int major = 0; major < 10000; ++major) {
    std::size_t j = 0;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < m; ++i) {
      const double v = x.dot(points[i]);
      if (v < best) {
        best = v;
        j = i;
      }
    }
    if (best >= x.squaredNorm() - eps) break;
    if (std::find(active.begin(), active.end(), j) != active.end()) break;
    active.push_back(j);
    lambda.push_back(0.0);

    for (int minor = 0; minor < 10000; ++minor) {
      // Affine min-norm point of the active set via the KKT system.
      const auto k = static_cast<long>(active.size());
      Matrix kkt = Matrix::Zero(k + 1, k + 1);
      for (long r = 0; r < k; ++r) {
        for (long c = 0; c < k; ++c) kkt(r, c) = points[active[r]].dot(points[active[c]]);
        kkt(r, k) = 1.0;
        kkt(k, r) = 1.0;
      }
      Vector rhs = Vector::Zero(k + 1);
      rhs(k) = 1.0;
      const Vector sol = kkt.completeOrthogonalDecomposition().solve(rhs);
      std::vector<double> alpha(sol.data(), sol.data() + k);

      if (std::all_of(alpha.begin(), alpha.end(), [](double a) { return a > 1e-14; })) {
        lambda = alpha;
        x = combine(lambda);
        break;
      }
      double theta = 1.0;
      for (long r = 0; r < k; ++r) {
        if (alpha[r] <= 1e-14) theta = std::min(theta, lambda[r] / (lambda[r] - alpha[r]));
      }
      for (long r = 0; r < k; ++r) lambda[r] = (1.0 - theta) * lambda[r] + theta * alpha[r];
      std::vector<std::size_t> keep_idx;
      std::vector<double> keep_w;
      for (long r = 0; r < k; ++r) {
        if (lambda[r] > 1e-14) {
          keep_idx.push_back(active[r]);
          keep_w.push_back(lambda[r]);
        }
      }
      active = std::move(keep_idx);
      lambda = std::move(keep_w);
      double total = 0.0;
      for (double w : lambda) total += w;
      for (double& w : lambda) w /= total;
      x = combine(lambda);
    }
  }
  if (weights != nullptr) {
    weights->assign(m, 0.0);
    for (std::size_t k = 0; k < active.size(); ++k) (*weights)[active[k]] = lambda[k];
  }
  return x;
}

}  // namespace incdual
