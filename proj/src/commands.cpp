#include "incdual/commands.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "incdual/format.hpp"

namespace incdual {

namespace {

std::string vec_str(const Vector& v) {
  std::string s;
  for (long i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v(i));
  return v.size() == 1 ? s : "(" + s + ")";
}

std::string seq_str(const std::vector<Vector>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) s += (i ? " " : "") + vec_str(vs[i]);
  return s;
}

Vector join(const Vector& a, const Vector& b) {
  Vector w(a.size() + b.size());
  w << a, b;
  return w;
}

SolveOptions inner_options(const CommandOptions& opts) {
  SolveOptions s = opts.solve;
  s.tol = std::min(s.tol, 1e-2 * opts.cert_tol);
  return s;
}

// A zero-residual stand-in when no certificate is computed.
CertificateReport no_certificate() {
  CertificateReport c;
  c.fenchel_terminal = 0.0;
  return c;
}

std::string single_csv(std::optional<double> delta, const PrimalSolution& ps, const DualSolution& ds,
                       const CertificateReport& cert) {
  return to_csv({make_row(delta, ps, ds, cert)});
}

}  // namespace

DiscreteProblem working_problem(const ProblemFile& pf, const CommandOptions& opts, std::optional<double>* delta) {
  if (pf.kind == ProblemKind::kDiscrete) {
    if (delta) delta->reset();
    return pf.discrete.value();
  }
  std::optional<MeshSpec> mesh;
  if (opts.delta) {
    try {
      mesh = MeshSpec::from_delta(*opts.delta);
    } catch (const Error& e) {
      fail(ErrorCode::kSemantic, std::string("--delta: ") + e.what());
    }
  } else if (!pf.delta_list.empty()) {
    mesh = pf.delta_list.front();
  } else {
    fail(ErrorCode::kSemantic, "a continuous problem needs --delta or a non-empty delta_list");
  }
  if (delta) *delta = mesh->delta();
  return build_pda(pf.continuous.value(), *mesh);
}

CommandResult run_solve(const ProblemFile& pf, const CommandOptions& opts) {
  std::optional<double> delta;
  const DiscreteProblem p = working_problem(pf, opts, &delta);
  const SolveOptions so = inner_options(opts);
  const PrimalSolution ps = p.is_semilinear() ? solve_primal(p, so) : brute_primal(p, so);

  CommandResult res;
  res.value = ps.value;
  res.status = ps.converged ? CommandStatus::kOk : CommandStatus::kBudgetExceeded;
  if (opts.format == OutputFormat::kCsv) {
    DualSolution none;
    none.value = std::numeric_limits<double>::quiet_NaN();
    none.converged = true;
    res.output = single_csv(delta, ps, none, no_certificate());
    return res;
  }
  std::ostringstream os;
  if (delta) os << "delta: " << format_double(*delta) << "\n";
  os << "primal value: " << ps.value.str() << "\n";
  os << "method: " << (p.is_semilinear() ? "projected subgradient" : "chain enumeration") << "\n";
  os << "iterations: " << ps.iterations << "\n";
  os << "converged: " << (ps.converged ? "yes" : "no") << "\n";
  if (!ps.trajectory.states.empty()) {
    os << "states: " << seq_str(ps.trajectory.states) << "\n";
    if (!ps.trajectory.controls.empty()) os << "controls: " << seq_str(ps.trajectory.controls) << "\n";
  }
  res.output = os.str();
  return res;
}

CommandResult run_dual(const ProblemFile& pf, const CommandOptions& opts) {
  std::optional<double> delta;
  const DiscreteProblem p = working_problem(pf, opts, &delta);
  const DualSolution ds = solve_dual(p, inner_options(opts));

  CommandResult res;
  res.value = ds.value;
  res.status = ds.converged ? CommandStatus::kOk : CommandStatus::kBudgetExceeded;
  if (opts.format == OutputFormat::kCsv) {
    PrimalSolution none;
    none.value = std::numeric_limits<double>::quiet_NaN();
    none.converged = true;
    res.output = single_csv(delta, none, ds, no_certificate());
    return res;
  }
  std::ostringstream os;
  if (delta) os << "delta: " << format_double(*delta) << "\n";
  os << "dual value: " << ds.value.str() << "\n";
  if (ds.value.is_minus_inf()) os << "note: the dual objective is -inf on every probed seed\n";
  os << "iterations: " << ds.iterations << "\n";
  os << "converged: " << (ds.converged ? "yes" : "no") << "\n";
  os << "x*: " << seq_str(ds.xstar) << "\n";
  os << "mu*: " << seq_str(ds.mustar) << "\n";
  res.output = os.str();
  return res;
}

CommandResult run_certify(const ProblemFile& pf, const CommandOptions& opts) {
  std::optional<double> delta;
  const DiscreteProblem p = working_problem(pf, opts, &delta);
  const SolveOptions so = inner_options(opts);

  PrimalSolution ps;
  if (!opts.primal_path.empty()) {
    ps.trajectory = parse_primal(p, read_file(opts.primal_path));
    const auto& x = ps.trajectory.states;
    ps.value = p.phi.value(join(x[p.N - 1], x[p.N]));
    ps.converged = true;
  } else {
    ps = solve_primal(p, so);
  }
  DualSolution ds;
  if (!opts.dual_path.empty()) {
    const DualVariables dv = parse_dual(read_file(opts.dual_path), p.n);
    try {
      dv.validate(p.n, p.N);
    } catch (const Error& e) {
      fail(ErrorCode::kSemantic, opts.dual_path + ": " + e.what());
    }
    ds.xstar = dv.xstar;
    ds.mustar = dv.mustar;
    ds.value = dual_objective(p, dv);
    ds.converged = true;
  } else {
    ds = solve_dual(p, so);
  }
  const CertificateReport cert = certify(p, ps, ds.variables(), opts.cert_tol);

  CommandResult res;
  res.value = cert.gap;
  res.passed = cert.passed;
  res.status = cert.passed ? CommandStatus::kOk : CommandStatus::kCertificateFail;
  if (opts.format == OutputFormat::kCsv) {
    res.output = single_csv(delta, ps, ds, cert);
    return res;
  }
  std::ostringstream os;
  if (delta) os << "delta: " << format_double(*delta) << "\n";
  os << "primal value: " << cert.primal_value.str() << "\n";
  os << "dual value: " << cert.dual_value.str() << "\n";
  os << "gap: " << cert.gap.str() << "\n";
  for (std::size_t t = 0; t < cert.el_residuals.size(); ++t) {
    os << "euler-lagrange t=" << t << ": adjoint " << format_double(cert.el_residuals[t].adjoint) << ", momentum "
       << format_double(cert.el_residuals[t].momentum) << ", argmax " << format_double(cert.argmax_residuals[t])
       << "\n";
  }
  os << "transversality: Q0 " << format_double(cert.trans0) << ", Q1 " << format_double(cert.trans1) << "\n";
  os << "terminal fenchel: " << cert.fenchel_terminal.str() << "\n";
  os << "tolerance: " << format_double(cert.tol) << " * (1 + |primal|)\n";
  const NondegeneracyReport nd = nondegeneracy_probe(p);
  for (const auto& it : nd.items) os << "nondegeneracy " << it.name << ": " << to_string(it.status) << " (" << it.message << ")\n";
  os << "certificate: " << (cert.passed ? "PASS" : "FAIL") << "\n";
  res.output = os.str();
  return res;
}

CommandResult run_sweep(const ProblemFile& pf, const CommandOptions& opts) {
  if (pf.kind != ProblemKind::kContinuous) fail(ErrorCode::kSemantic, "sweep needs a continuous problem");
  const SweepReport rep = cmd_sweep(pf.continuous.value(), pf.delta_list, inner_options(opts), pf.reference,
                                    opts.cert_tol);
  CommandResult res;
  res.output = opts.format == OutputFormat::kCsv ? rep.csv() : rep.summary();
  if (rep.order) res.value = *rep.order;
  return res;
}

CommandResult run_oracle(const ProblemFile& pf, const CommandOptions& opts) {
  std::optional<double> delta;
  const DiscreteProblem p = working_problem(pf, opts, &delta);
  const PrimalSolution ps = brute_primal(p, opts.solve);
  std::optional<DualSolution> ds;
  if (p.is_semilinear() && p.n <= 2) ds = brute_dual(p, opts.solve);

  CommandResult res;
  res.value = ps.value;
  if (opts.format == OutputFormat::kCsv) {
    ReportRow row;
    row.delta = delta;
    row.primal = ps.value;
    row.dual = ds ? ds->value : ExtReal::minus_inf();
    row.gap = row.primal - row.dual;
    row.fenchel_residual = 0.0;
    row.iterations = ps.iterations + (ds ? ds->iterations : 0);
    row.converged = ps.converged && (!ds || ds->converged);
    res.output = to_csv({row});
    return res;
  }
  std::ostringstream os;
  if (delta) os << "delta: " << format_double(*delta) << "\n";
  os << "grid resolution: " << opts.solve.grid_resolution << "\n";
  os << "primal oracle: " << ps.value.str() << (ps.value.is_plus_inf() ? " (infeasible)" : "") << "\n";
  os << "points evaluated: " << ps.iterations << "\n";
  if (!ps.trajectory.states.empty()) os << "states: " << seq_str(ps.trajectory.states) << "\n";
  if (ds) {
    os << "dual oracle: " << ds->value.str() << "\n";
    if (ds->value.is_minus_inf()) os << "note: no grid seed reached the conjugate's domain; try a finer --grid\n";
    if (!ds->xstar.empty()) os << "x*: " << seq_str(ds->xstar) << "\n";
  }
  res.output = os.str();
  return res;
}

std::vector<double> pascal_flat(int order, double delta, const std::vector<double>& in) {
  const std::size_t blocks = static_cast<std::size_t>(order) + 1;
  if (order < 1 || in.empty() || in.size() % blocks != 0) {
    fail(ErrorCode::kInvalidArgument, "pascal: expected a multiple of order + 1 input values");
  }
  const long n = static_cast<long>(in.size() / blocks);
  std::vector<Vector> ys;
  for (std::size_t i = 0; i < blocks; ++i) ys.push_back(Eigen::Map<const Vector>(in.data() + i * n, n));
  std::vector<double> out;
  for (const auto& v : pascal_args(order, delta, ys)) out.insert(out.end(), v.data(), v.data() + v.size());
  return out;
}

CommandResult run_conjugate(const std::vector<ConjugateQuery>& queries, const CommandOptions& opts) {
  std::ostringstream os;
  auto list = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_double(v[i]);
    return s;
  };
  const bool text = opts.format == OutputFormat::kText;
  CommandResult res;
  for (const auto& q : queries) {
    std::string line;
    if (q.op == "pascal") {
      line = list(pascal_flat(q.order, q.delta, q.in));
    } else if (q.op == "conjugate") {
      res.value = q.phi->conjugate(q.at);
      line = res.value.str();
    } else if (q.op == "value") {
      res.value = q.phi->value(q.at);
      line = res.value.str();
    } else {
      res.value = phi_lift_conjugate(*q.phi, q.delta, q.xstar, q.ystar);
      line = res.value.str();
    }
    os << (text ? q.op + ": " : "") << line << "\n";
  }
  res.output = os.str();
  return res;
}

}  // namespace incdual
