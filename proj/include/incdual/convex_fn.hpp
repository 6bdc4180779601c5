#pragma once

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "incdual/ext_real.hpp"
#include "incdual/linalg.hpp"

namespace incdual {

/// Proper convex function on R^d from a small closed family. Every variant
/// except `sampled` has a closed-form conjugate.
class ConvexFn {
 public:
  struct Affine {
    Vector c;
    double b;
  };
  struct Quadratic {
    Matrix P;
    Vector c;
    double b;
    // P = V diag(eig) V^T, cached at construction.
    Vector eig;
    Matrix V;
  };
  struct CoordinateSelect {
    std::vector<int> indices;
  };
  struct Norm1 {};
  struct Norm2Sq {};
  /// Values on a finite point set. In one dimension, evaluation interpolates
  /// linearly between neighbouring samples; elsewhere it is +inf off-grid.
  struct Sampled {
    std::vector<Vector> points;
    std::vector<double> values;
  };
  /// Phi(x, y) = base(x, (y - x) / delta) with x, y in R^n and base on R^{2n}.
  struct Lifted {
    std::shared_ptr<const ConvexFn> base;
    double delta;
  };

  static ConvexFn affine(Vector c, double b);
  /// Rejects non-symmetric or indefinite P.
  static ConvexFn quadratic(Matrix P, Vector c, double b);
  static ConvexFn coordinate_select(int dim, std::vector<int> indices);
  static ConvexFn norm1(int dim);
  static ConvexFn norm2sq(int dim);
  static ConvexFn sampled(std::vector<Vector> points, std::vector<double> values);
  static ConvexFn lifted(ConvexFn base, double delta);

  int dim() const { return dim_; }
  std::string kind() const;

  ExtReal value(const Vector& x) const;
  /// Closed-form Legendre-Fenchel conjugate. Throws kUnsupported for sampled.
  ExtReal conjugate(const Vector& p) const;
  /// One element of the subdifferential; the minimal-norm one at kinks.
  Vector subgradient(const Vector& x) const;
  /// One element of the subdifferential of the conjugate at p, i.e. a
  /// maximizer of <x, p> - f(x); minimal-norm selection.
  Vector conjugate_subgradient(const Vector& p) const;
  /// Euclidean projection onto dom f*. Not available for sampled/lifted.
  Vector project_conjugate_domain(const Vector& p) const;

  using Variant = std::variant<Affine, Quadratic, CoordinateSelect, Norm1, Norm2Sq, Sampled, Lifted>;
  const Variant& data() const { return data_; }

 private:
  ConvexFn(Variant v, int dim) : data_(std::move(v)), dim_(dim) {}

  Variant data_;
  int dim_ = 0;
};

}  // namespace incdual
