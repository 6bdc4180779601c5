#pragma once

#include <vector>

#include "incdual/convex_fn.hpp"
#include "incdual/convex_set.hpp"

namespace incdual {

/// Tensor grid with `count` equally spaced points per axis on [lower, upper].
struct GridSpec {
  Vector lower;
  Vector upper;
  int count = 0;

  std::vector<Vector> points() const;
  std::size_t size() const;
};

/// W_S(d) = sup_{x in S} <x, d>.
ExtReal support(const ConvexSet& s, const Vector& d);
Projection project(const ConvexSet& s, const Vector& x);

ExtReal conjugate(const ConvexFn& f, const Vector& p);

/// max over grid points x of <x, p> - f(x). This is a lower bound on the
/// conjugate of the underlying function and converges as the grid refines.
ExtReal lf_numeric(const ConvexFn& sampled, const Vector& p);

/// min over grid points u1 of f(u1) + g(u - u1).
ExtReal infconv_numeric(const ConvexFn& f, const ConvexFn& g, const Vector& u, const GridSpec& grid);

/// Samples f at every grid point (dropping points where f = +inf).
ConvexFn sample(const ConvexFn& f, const GridSpec& grid);

/// f(x) + f*(p) - <p, x>; +inf if either term is +inf.
ExtReal fenchel_residual(const ConvexFn& f, const Vector& x, const Vector& p);

Vector subgradient(const ConvexFn& f, const Vector& x);

/// W_S(d) - <d, x> for x in S. Zero exactly when x attains the support of S
/// in direction d. Throws kNotInDomain when dist(x, S) > tol.
ExtReal support_attainment_residual(const ConvexSet& s, const Vector& x, const Vector& d, double tol = 1e-8);

}  // namespace incdual
