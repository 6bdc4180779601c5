#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incdual/report.hpp"

namespace incdual {

enum class OutputFormat { kText, kCsv };

struct CommandOptions {
  SolveOptions solve;
  double cert_tol = kDefaultCertTol;
  OutputFormat format = OutputFormat::kText;
  std::optional<double> delta;  // mesh for continuous problems outside the sweep
  std::string primal_path;      // certify: primal file instead of solve_primal
  std::string dual_path;        // certify: dual file instead of solve_dual
};

enum class CommandStatus { kOk = 0, kCertificateFail = 3, kBudgetExceeded = 4 };

struct CommandResult {
  std::string output;
  CommandStatus status = CommandStatus::kOk;
  ExtReal value = 0.0;
  bool passed = true;
};

CommandResult run_solve(const ProblemFile& pf, const CommandOptions& opts);
CommandResult run_dual(const ProblemFile& pf, const CommandOptions& opts);
CommandResult run_certify(const ProblemFile& pf, const CommandOptions& opts);
CommandResult run_sweep(const ProblemFile& pf, const CommandOptions& opts);
CommandResult run_oracle(const ProblemFile& pf, const CommandOptions& opts);
CommandResult run_conjugate(const std::vector<ConjugateQuery>& queries, const CommandOptions& opts);

/// Pascal transform of scalar-or-blockwise values (size (order + 1) * n),
/// returned flattened.
std::vector<double> pascal_flat(int order, double delta, const std::vector<double>& in);

/// The discrete problem a command works on: as given, or build_pda at
/// opts.delta (else the first delta_list entry) for continuous files.
DiscreteProblem working_problem(const ProblemFile& pf, const CommandOptions& opts, std::optional<double>* delta);

}  // namespace incdual
