#pragma once

#include <optional>
#include <string>
#include <vector>

#include "incdual/duality.hpp"

namespace incdual {

enum class ProblemKind { kDiscrete, kContinuous };

/// In-memory form of a problem file. Exactly one of `discrete` and
/// `continuous` is set, matching `kind`.
struct ProblemFile {
  ProblemKind kind = ProblemKind::kDiscrete;
  std::optional<DiscreteProblem> discrete;
  std::optional<ContinuousProblem> continuous;
  std::vector<MeshSpec> delta_list;  // continuous only
  std::optional<double> reference;   // limit value for the sweep summary
};

/// Parses and validates a JSON problem document. Throws Error with kParse
/// (malformed JSON), kSchema (missing or mistyped fields) or kSemantic
/// (dimensions, PSD, deltas); messages carry the field path and line.
ProblemFile parse_problem(const std::string& text);

/// Serializes back to JSON; parse_problem(emit(pf)) reproduces pf.
std::string emit(const ProblemFile& pf);

/// {"xstar": [...], "mustar": [...]}; scalars are accepted for n = 1.
DualVariables parse_dual(const std::string& text, int n);
std::string emit_dual(const DualVariables& dv);

/// {"x0": [...], "x1": [...], "controls": [[...], ...]}; states are
/// reconstructed by the recursion.
Trajectory parse_primal(const DiscreteProblem& p, const std::string& text);

/// One evaluation from a conjugate expression file:
///   {"op": "conjugate", "phi": {...}, "dim": d, "at": [...]}
///   {"op": "value", "phi": {...}, "dim": d, "at": [...]}
///   {"op": "lift_conjugate", "phi": {...}, "dim": 2n, "delta": d, "xstar": [...], "ystar": [...]}
///   {"op": "pascal", "order": m, "delta": d, "in": [...]}
/// The file holds one such object or {"queries": [...]}.
struct ConjugateQuery {
  std::string op;
  std::optional<ConvexFn> phi;
  Vector at, xstar, ystar;
  int order = 0;
  double delta = 0.0;
  std::vector<double> in;
};

std::vector<ConjugateQuery> parse_conjugate_queries(const std::string& text);

std::string read_file(const std::string& path);

/// Field-by-field equality within `tol`.
bool same_problem(const DiscreteProblem& a, const DiscreteProblem& b, double tol = 0.0);
bool same_problem(const ContinuousProblem& a, const ContinuousProblem& b, double tol = 0.0);

}  // namespace incdual
