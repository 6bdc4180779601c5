#pragma once

#include <cstdint>
#include <vector>

#include "incdual/duality.hpp"

namespace incdual {

struct SolveOptions {
  int max_iter = 4000;
  double step0 = 1.0;  // subgradient step schedule step0 / sqrt(k)
  double tol = 1e-10;
  int restarts = 2;
  std::uint64_t rng_seed = 0;
  int grid_resolution = 25;  // points per axis for the brute-force oracles
  double dual_box = 3.0;     // brute_dual seed box [-dual_box, dual_box]^{2n}
  bool refine_dual = true;   // brute_dual: second pass around the best cell

  void validate() const;
};

inline constexpr std::size_t kGridBudget = 10'000'000;

struct DualSolution {
  std::vector<Vector> xstar;
  std::vector<Vector> mustar;
  ExtReal value = ExtReal::minus_inf();
  int iterations = 0;
  bool converged = false;

  DualVariables variables() const { return {xstar, mustar}; }
};

/// Projected subgradient descent over (x_0, x_1, u_0, ..., u_{N-2}) in
/// Q0 x Q1 x U^{N-1}, followed by a projected compass search from the best
/// iterate. States are always reconstructed by the recursion.
PrimalSolution solve_primal(const DiscreteProblem& p, const SolveOptions& opts = {});

/// Exhaustive enumeration: grid over Q0 x Q1 x U^{N-1} for semilinear maps,
/// all triple chains for tabulated maps. Value +inf when nothing is feasible.
PrimalSolution brute_primal(const DiscreteProblem& p, const SolveOptions& opts = {});

/// x*_t = A0^T x*_{t+2} + A1^T x*_{t+1} backwards from (x*_{N-1}, x*_N).
std::vector<Vector> adjoint_recursion(const Matrix& A0, const Matrix& A1, const Vector& xstar_nm1,
                                      const Vector& xstar_n, int N);

/// Dual variables on the adjoint subspace generated by the seed:
/// mu*_{t+1} = A1^T x*_{t+2}, mu*_0 = x*_0 - A0^T x*_2.
DualVariables dual_from_seed(const DiscreteProblem& p, const Vector& xstar_nm1, const Vector& xstar_n);

/// Maximizes the reduced concave dual over the 2n-dimensional seed, moving
/// in the coordinates of the terminal conjugate argument so that affine-type
/// terminal costs pin the iterate to the conjugate's domain.
DualSolution solve_dual(const DiscreteProblem& p, const SolveOptions& opts = {});

/// Grid search over seeds in [-dual_box, dual_box]^{2n} (n <= 2), optionally
/// refined once around the best cell.
DualSolution brute_dual(const DiscreteProblem& p, const SolveOptions& opts = {});

/// Grid of points of a compact set at `resolution` points per axis (box
/// tensor grid; ball/polytope: bounding-box grid filtered by membership plus
/// center/vertices).
std::vector<Vector> set_grid(const ConvexSet& s, int resolution);

}  // namespace incdual
