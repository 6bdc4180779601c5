#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incdual/problem_io.hpp"
#include "incdual/solvers.hpp"

namespace incdual {

inline constexpr const char* kCsvHeader =
    "delta,primal,dual,gap,el_residual_max,trans_residual_max,fenchel_residual,iterations,converged";

struct ReportRow {
  std::optional<double> delta;  // empty for a plain discrete instance
  ExtReal primal = ExtReal::plus_inf();
  ExtReal dual = ExtReal::minus_inf();
  ExtReal gap = ExtReal::plus_inf();
  double el_residual_max = 0.0;
  double trans_residual_max = 0.0;
  ExtReal fenchel_residual = ExtReal::plus_inf();
  int iterations = 0;
  bool converged = false;
  std::string error;  // non-empty when the row failed
};

ReportRow make_row(std::optional<double> delta, const PrimalSolution& ps, const DualSolution& ds,
                   const CertificateReport& cert);

std::string csv_row(const ReportRow& row);
std::string to_csv(const std::vector<ReportRow>& rows);

struct SweepReport {
  std::vector<ReportRow> rows;                 // descending delta
  std::vector<std::optional<ExtReal>> oracle;  // brute_primal value where it was sized
  std::optional<double> reference;
  std::optional<double> order;  // log-log slope of |primal - reference| against delta

  std::string csv() const { return to_csv(rows); }
  std::string summary() const;
};

/// Least-squares slope of log err against log delta over the pairs with
/// err > 0; nullopt with fewer than two usable pairs.
std::optional<double> empirical_order(const std::vector<double>& deltas, const std::vector<double>& errors);

/// Per mesh: build_pda, solve_primal (plus brute_primal when the grid has at
/// most `oracle_budget` points), solve_dual, certify. Meshes run concurrently;
/// a failing mesh is recorded in its row.
SweepReport cmd_sweep(const ContinuousProblem& cp, const std::vector<MeshSpec>& deltas, const SolveOptions& opts,
                      std::optional<double> reference = std::nullopt, double cert_tol = kDefaultCertTol,
                      std::size_t oracle_budget = 1'000'000);

}  // namespace incdual
