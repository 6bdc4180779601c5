#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "incdual/convex_fn.hpp"
#include "incdual/convex_set.hpp"

namespace incdual {

/// F(x, y) = A0 x + A1 y + B U.
struct SemilinearMap {
  Matrix A0, A1, B;
  ConvexSet U;

  SemilinearMap(Matrix a0, Matrix a1, Matrix b, ConvexSet u);
  int n() const { return static_cast<int>(A0.rows()); }
  int r() const { return static_cast<int>(B.cols()); }
};

struct GraphTriple {
  Vector x, y, z;
};

/// Finite graph {(x, y, z)}; convexity is not assumed.
struct TabulatedMap {
  std::vector<GraphTriple> triples;

  explicit TabulatedMap(std::vector<GraphTriple> t);
  int n() const { return static_cast<int>(triples.front().x.size()); }
};

using InclusionMap = std::variant<SemilinearMap, TabulatedMap>;

int state_dim(const InclusionMap& map);

/// minimize phi(x_{N-1}, x_N) s.t. x_{t+2} in F(x_t, x_{t+1}), x_0 in Q0, x_1 in Q1.
struct DiscreteProblem {
  int n = 0;
  int r = 0;  // 0 for tabulated maps
  int N = 0;
  InclusionMap map;
  ConvexFn phi;
  ConvexSet Q0, Q1;

  /// Checks horizon and dimensional consistency; throws kDimensionMismatch /
  /// kInvalidArgument.
  void validate() const;
  const SemilinearMap& semilinear() const;
  bool is_semilinear() const { return std::holds_alternative<SemilinearMap>(map); }
};

struct Trajectory {
  std::vector<Vector> states;    // x_0 .. x_N
  std::vector<Vector> controls;  // u_0 .. u_{N-2}, semilinear only
};

/// H_F(x, y, z*) = sup {<z, z*> : z in F(x, y)}; -inf when F(x, y) is empty.
ExtReal hamiltonian(const InclusionMap& map, const Vector& x, const Vector& y, const Vector& zstar);

/// M_F(x*, y*, z*) = inf {<x, x*> + <y, y*> - <z, z*> : (x, y, z) in gph F}.
ExtReal m_function(const InclusionMap& map, const Vector& xstar, const Vector& ystar, const Vector& zstar);

/// An element z of F(x, y) with <z, z*> = H_F(x, y, z*).
Vector argmax_rep(const InclusionMap& map, const Vector& x, const Vector& y, const Vector& zstar);

/// x_{t+2} = A0 x_t + A1 x_{t+1} + B u_t. Throws kNotInDomain if some u_t is
/// farther than `tol` from U.
Trajectory simulate(const SemilinearMap& map, const Vector& x0, const Vector& x1, const std::vector<Vector>& controls,
                    double tol = 1e-8);

/// Largest violation of the dynamics and endpoint constraints of `p` along
/// `traj` (recursion residual for semilinear maps, distance to the nearest
/// listed triple for tabulated ones).
double feasibility_residual(const DiscreteProblem& p, const Trajectory& traj);

}  // namespace incdual
