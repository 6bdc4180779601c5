#pragma once

#include <string>
#include <variant>
#include <vector>

#include "incdual/ext_real.hpp"
#include "incdual/linalg.hpp"

namespace incdual {

struct Projection {
  Vector point;
  double distance = 0.0;
};

/// Nonempty compact convex subset of R^n: box, Euclidean ball, convex hull of
/// finitely many vertices, or a single point.
class ConvexSet {
 public:
  struct Box {
    Vector lower, upper;
  };
  struct Ball {
    Vector center;
    double radius;
  };
  struct Polytope {
    std::vector<Vector> vertices;
  };
  struct Singleton {
    Vector point;
  };

  static ConvexSet box(Vector lower, Vector upper);
  static ConvexSet ball(Vector center, double radius);
  static ConvexSet polytope(std::vector<Vector> vertices);
  static ConvexSet singleton(Vector point);

  int dim() const { return dim_; }
  std::string kind() const;

  /// sup over x in S of <x, d>.
  double support(const Vector& d) const;
  /// A maximizer of <x, d> over S. Boxes resolve ties (|d_i| <= 1e-12)
  /// to the coordinate closest to zero; polytopes to the first maximizing
  /// vertex; balls to the center.
  Vector support_point(const Vector& d) const;
  Projection project(const Vector& x) const;
  bool contains(const Vector& x, double tol = kEqTol) const { return project(x).distance <= tol; }

  /// Axis-aligned bounding box (lower, upper).
  std::pair<Vector, Vector> bounds() const;
  /// True when the set has nonempty interior in R^n.
  bool has_interior() const;

  ConvexSet scaled(double s) const;
  /// Minkowski sum when the result is representable by one of the variants.
  /// Throws kUnsupported for ball + box/polytope combinations.
  static ConvexSet minkowski_sum(const ConvexSet& a, const ConvexSet& b);

  using Variant = std::variant<Box, Ball, Polytope, Singleton>;
  const Variant& data() const { return data_; }

 private:
  ConvexSet(Variant v, int dim) : data_(std::move(v)), dim_(dim) {}

  Variant data_;
  int dim_ = 0;
};

/// Nearest point of conv{points} to the origin (Wolfe's minimum-norm-point
/// algorithm). Returns the point and its barycentric weights.
Vector min_norm_point_in_hull(const std::vector<Vector>& points, std::vector<double>* weights = nullptr);

}  // namespace incdual
