#include "incdual/convex_fn.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace incdual {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vector selector(int dim, const std::vector<int>& indices) {
  Vector s = Vector::Zero(dim);
  for (int i : indices) s(i) = 1.0;
  return s;
}

// Eigenvalues below this fraction of the largest are treated as zero.
double null_threshold(const Vector& eig) {
  const double top = eig.size() ? eig.cwiseAbs().maxCoeff() : 0.0;
  return 1e-12 * std::max(top, 1.0);
}

std::pair<Vector, Vector> split(const Vector& w) {
  const long n = w.size() / 2;
  return {w.head(n), w.tail(n)};
}

Vector join(const Vector& a, const Vector& b) {
  Vector w(a.size() + b.size());
  w << a, b;
  return w;
}

}  // namespace

ConvexFn ConvexFn::affine(Vector c, double b) {
  if (c.size() == 0) fail(ErrorCode::kInvalidArgument, "affine: empty dimension");
  if (!c.allFinite() || !std::isfinite(b)) fail(ErrorCode::kInvalidArgument, "affine: non-finite coefficient");
  const int d = static_cast<int>(c.size());
  return ConvexFn(Affine{std::move(c), b}, d);
}

ConvexFn ConvexFn::quadratic(Matrix P, Vector c, double b) {
  const auto d = c.size();
  if (d == 0) fail(ErrorCode::kInvalidArgument, "quadratic: empty dimension");
  if (P.rows() != d || P.cols() != d) {
    fail(ErrorCode::kDimensionMismatch, "quadratic: P must be " + std::to_string(d) + "x" + std::to_string(d));
  }
  if (!P.allFinite() || !c.allFinite() || !std::isfinite(b)) {
    fail(ErrorCode::kInvalidArgument, "quadratic: non-finite coefficient");
  }
  const double scale = std::max(1.0, P.cwiseAbs().maxCoeff());
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorCode::kInvalidArgument, "quadratic: P is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(P);
  if (es.info() != Eigen::Success) fail(ErrorCode::kInvalidArgument, "quadratic: eigen-decomposition failed");
  if (es.eigenvalues().minCoeff() < -1e-10 * scale) {
    fail(ErrorCode::kInvalidArgument,
         "quadratic: P is not positive semidefinite (min eigenvalue " + std::to_string(es.eigenvalues().minCoeff()) +
             ")");
  }
  Quadratic q{std::move(P), std::move(c), b, es.eigenvalues(), es.eigenvectors()};
  return ConvexFn(std::move(q), static_cast<int>(d));
}

ConvexFn ConvexFn::coordinate_select(int dim, std::vector<int> indices) {
  if (dim <= 0) fail(ErrorCode::kInvalidArgument, "coordinate-select: dimension must be positive");
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    fail(ErrorCode::kInvalidArgument, "coordinate-select: repeated index");
  }
  for (int i : indices) {
    if (i < 0 || i >= dim) fail(ErrorCode::kInvalidArgument, "coordinate-select: index out of range");
  }
  return ConvexFn(CoordinateSelect{std::move(indices)}, dim);
}

ConvexFn ConvexFn::norm1(int dim) {
  if (dim <= 0) fail(ErrorCode::kInvalidArgument, "norm1: dimension must be positive");
  return ConvexFn(Norm1{}, dim);
}

ConvexFn ConvexFn::norm2sq(int dim) {
  if (dim <= 0) fail(ErrorCode::kInvalidArgument, "norm2sq: dimension must be positive");
  return ConvexFn(Norm2Sq{}, dim);
}

ConvexFn ConvexFn::sampled(std::vector<Vector> points, std::vector<double> values) {
  if (points.empty()) fail(ErrorCode::kInvalidArgument, "sampled: empty grid");
  if (points.size() != values.size()) fail(ErrorCode::kDimensionMismatch, "sampled: points/values length mismatch");
  const auto d = points.front().size();
  if (d == 0) fail(ErrorCode::kInvalidArgument, "sampled: empty dimension");
  for (std::size_t i = 0; i < points.size(); ++i) {
    require_dim(points[i].size(), d, "sampled point");
    if (!std::isfinite(values[i])) fail(ErrorCode::kInvalidArgument, "sampled: values must be finite");
  }
  if (d == 1) {
    std::vector<std::size_t> order(points.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return points[a](0) < points[b](0); });
    std::vector<Vector> ps;
    std::vector<double> vs;
    for (auto i : order) {
      ps.push_back(points[i]);
      vs.push_back(values[i]);
    }
    points = std::move(ps);
    values = std::move(vs);
  }
  return ConvexFn(Sampled{std::move(points), std::move(values)}, static_cast<int>(d));
}

ConvexFn ConvexFn::lifted(ConvexFn base, double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) fail(ErrorCode::kInvalidArgument, "lifted: delta must be > 0");
  if (base.dim() % 2 != 0) fail(ErrorCode::kDimensionMismatch, "lifted: base function must act on R^{2n}");
  const int d = base.dim();
  return ConvexFn(Lifted{std::make_shared<const ConvexFn>(std::move(base)), delta}, d);
}

std::string ConvexFn::kind() const {
  return std::visit(overloaded{[](const Affine&) { return "affine"; }, [](const Quadratic&) { return "quadratic"; },
                               [](const CoordinateSelect&) { return "coordinate"; },
                               [](const Norm1&) { return "norm1"; }, [](const Norm2Sq&) { return "norm2sq"; },
                               [](const Sampled&) { return "sampled"; }, [](const Lifted&) { return "lifted"; }},
                    data_);
}

ExtReal ConvexFn::value(const Vector& x) const {
  require_dim(x.size(), dim_, "function argument");
  return std::visit(
      overloaded{
          [&](const Affine& f) -> ExtReal { return f.c.dot(x) + f.b; },
          [&](const Quadratic& f) -> ExtReal { return 0.5 * x.dot(f.P * x) + f.c.dot(x) + f.b; },
          [&](const CoordinateSelect& f) -> ExtReal {
            double s = 0.0;
            for (int i : f.indices) s += x(i);
            return s;
          },
          [&](const Norm1&) -> ExtReal { return x.lpNorm<1>(); },
          [&](const Norm2Sq&) -> ExtReal { return 0.5 * x.squaredNorm(); },
          [&](const Sampled& f) -> ExtReal {
            if (dim_ == 1) {
              const double t = x(0);
              const auto& ps = f.points;
              if (t < ps.front()(0) - kTieTol || t > ps.back()(0) + kTieTol) return ExtReal::plus_inf();
              auto it = std::lower_bound(ps.begin(), ps.end(), t, [](const Vector& p, double v) { return p(0) < v; });
              if (it == ps.end()) return f.values.back();
              const auto hi = static_cast<std::size_t>(it - ps.begin());
              if (hi == 0 || std::abs((*it)(0) - t) <= kTieTol) return f.values[hi];
              const double x0 = ps[hi - 1](0), x1 = ps[hi](0);
              const double w = (t - x0) / (x1 - x0);
              return (1.0 - w) * f.values[hi - 1] + w * f.values[hi];
            }
            for (std::size_t i = 0; i < f.points.size(); ++i) {
              if (approx_equal(f.points[i], x, kTieTol)) return f.values[i];
            }
            return ExtReal::plus_inf();
          },
          [&](const Lifted& f) -> ExtReal {
            auto [a, b] = split(x);
            return f.base->value(join(a, (b - a) / f.delta));
          },
      },
      data_);
}

ExtReal ConvexFn::conjugate(const Vector& p) const {
  require_dim(p.size(), dim_, "conjugate argument");
  return std::visit(
      overloaded{
          [&](const Affine& f) -> ExtReal {
            return approx_equal(p, f.c) ? ExtReal(-f.b) : ExtReal::plus_inf();
          },
          [&](const Quadratic& f) -> ExtReal {
            const Vector r = f.V.transpose() * (p - f.c);
            const double thr = null_threshold(f.eig);
            double s = 0.0;
            for (long i = 0; i < r.size(); ++i) {
              if (f.eig(i) <= thr) {
                if (std::abs(r(i)) > kEqTol) return ExtReal::plus_inf();
              } else {
                s += r(i) * r(i) / f.eig(i);
              }
            }
            return 0.5 * s - f.b;
          },
          [&](const CoordinateSelect& f) -> ExtReal {
            return approx_equal(p, selector(dim_, f.indices)) ? ExtReal(0.0) : ExtReal::plus_inf();
          },
          [&](const Norm1&) -> ExtReal {
            return p.lpNorm<Eigen::Infinity>() <= 1.0 + kEqTol ? ExtReal(0.0) : ExtReal::plus_inf();
          },
          [&](const Norm2Sq&) -> ExtReal { return 0.5 * p.squaredNorm(); },
          [&](const Sampled&) -> ExtReal {
            fail(ErrorCode::kUnsupported, "conjugate: sampled functions go through lf_numeric");
          },
          [&](const Lifted& f) -> ExtReal {
            auto [a, b] = split(p);
            return f.base->conjugate(join(a + b, f.delta * b));
          },
      },
      data_);
}

Vector ConvexFn::subgradient(const Vector& x) const {
  require_dim(x.size(), dim_, "subgradient argument");
  return std::visit(
      overloaded{
          [&](const Affine& f) -> Vector { return f.c; },
          [&](const Quadratic& f) -> Vector { return f.P * x + f.c; },
          [&](const CoordinateSelect& f) -> Vector { return selector(dim_, f.indices); },
          [&](const Norm1&) -> Vector {
            Vector g(x.size());
            for (long i = 0; i < x.size(); ++i) g(i) = x(i) > 0 ? 1.0 : (x(i) < 0 ? -1.0 : 0.0);
            return g;
          },
          [&](const Norm2Sq&) -> Vector { return x; },
          [&](const Sampled&) -> Vector { fail(ErrorCode::kUnsupported, "subgradient: sampled functions"); },
          [&](const Lifted& f) -> Vector {
            auto [a, b] = split(x);
            const Vector g = f.base->subgradient(join(a, (b - a) / f.delta));
            auto [g1, g2] = split(g);
            return join(g1 - g2 / f.delta, g2 / f.delta);
          },
      },
      data_);
}

Vector ConvexFn::conjugate_subgradient(const Vector& p) const {
  require_dim(p.size(), dim_, "conjugate subgradient argument");
  return std::visit(
      overloaded{
          [&](const Quadratic& f) -> Vector {
            const Vector r = f.V.transpose() * (p - f.c);
            const double thr = null_threshold(f.eig);
            Vector y = Vector::Zero(r.size());
            for (long i = 0; i < r.size(); ++i) {
              if (f.eig(i) > thr) y(i) = r(i) / f.eig(i);
            }
            return f.V * y;
          },
          [&](const Norm2Sq&) -> Vector { return p; },
          [&](const Sampled&) -> Vector { fail(ErrorCode::kUnsupported, "conjugate subgradient: sampled functions"); },
          [&](const Lifted& f) -> Vector {
            auto [a, b] = split(p);
            const Vector g = f.base->conjugate_subgradient(join(a + b, f.delta * b));
            auto [g1, g2] = split(g);
            return join(g1, g1 + f.delta * g2);
          },
          // Conjugate is an indicator: the normal cone always contains 0.
          [&](const auto&) -> Vector { return Vector::Zero(dim_); },
      },
      data_);
}

Vector ConvexFn::project_conjugate_domain(const Vector& p) const {
  require_dim(p.size(), dim_, "conjugate domain point");
  return std::visit(
      overloaded{
          [&](const Affine& f) -> Vector { return f.c; },
          [&](const Quadratic& f) -> Vector {
            Vector r = f.V.transpose() * (p - f.c);
            const double thr = null_threshold(f.eig);
            for (long i = 0; i < r.size(); ++i) {
              if (f.eig(i) <= thr) r(i) = 0.0;
            }
            return f.c + f.V * r;
          },
          [&](const CoordinateSelect& f) -> Vector { return selector(dim_, f.indices); },
          [&](const Norm1&) -> Vector { return p.cwiseMax(-1.0).cwiseMin(1.0); },
          [&](const Norm2Sq&) -> Vector { return p; },
          [&](const auto&) -> Vector {
            fail(ErrorCode::kUnsupported, "conjugate domain projection for " + kind() + " functions");
          },
      },
      data_);
}

}  // namespace incdual
