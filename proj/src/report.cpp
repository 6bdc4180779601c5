#include "incdual/report.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

#include "incdual/format.hpp"

namespace incdual {

ReportRow make_row(std::optional<double> delta, const PrimalSolution& ps, const DualSolution& ds,
                   const CertificateReport& cert) {
  ReportRow row;
  row.delta = delta;
  row.primal = ps.value;
  row.dual = ds.value;
  row.gap = ps.value - ds.value;
  row.el_residual_max = cert.el_residual_max();
  row.trans_residual_max = cert.trans_residual_max();
  row.fenchel_residual = cert.fenchel_terminal;
  row.iterations = ps.iterations + ds.iterations;
  row.converged = ps.converged && ds.converged;
  return row;
}

std::string csv_row(const ReportRow& row) {
  std::string s = row.delta ? format_double(*row.delta) : "";
  if (!row.error.empty()) return s + ",nan,nan,nan,nan,nan,nan,0,false";
  s += "," + row.primal.str() + "," + row.dual.str() + "," + row.gap.str();
  s += "," + format_double(row.el_residual_max) + "," + format_double(row.trans_residual_max);
  s += "," + row.fenchel_residual.str() + "," + std::to_string(row.iterations);
  s += row.converged ? ",true" : ",false";
  return s;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::string out = std::string(kCsvHeader) + "\n";
  for (const auto& r : rows) out += csv_row(r) + "\n";
  return out;
}

std::optional<double> empirical_order(const std::vector<double>& deltas, const std::vector<double>& errors) {
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i < deltas.size() && i < errors.size(); ++i) {
    if (deltas[i] > 0 && errors[i] > 0 && std::isfinite(errors[i])) pts.emplace_back(std::log(deltas[i]), std::log(errors[i]));
  }
  if (pts.size() < 2) return std::nullopt;
  double mx = 0, my = 0;
  for (auto [x, y] : pts) mx += x, my += y;
  mx /= pts.size();
  my /= pts.size();
  double sxy = 0, sxx = 0;
  for (auto [x, y] : pts) sxy += (x - mx) * (y - my), sxx += (x - mx) * (x - mx);
  if (sxx == 0) return std::nullopt;
  return sxy / sxx;
}

std::string SweepReport::summary() const {
  std::ostringstream os;
  os << "meshes: " << rows.size() << "\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    os << "  delta " << format_double(r.delta.value_or(0.0)) << ": ";
    if (!r.error.empty()) {
      os << "error: " << r.error << "\n";
      continue;
    }
    os << "primal " << r.primal.str() << ", dual " << r.dual.str() << ", gap " << r.gap.str();
    if (i < oracle.size() && oracle[i]) os << ", oracle " << oracle[i]->str();
    os << (r.converged ? "" : " (not converged)") << "\n";
  }
  if (reference) {
    os << "reference: " << format_double(*reference) << "\n";
    os << "empirical order: " << (order ? format_double(*order) : std::string("n/a")) << "\n";
  }
  return os.str();
}

namespace {

struct MeshOutcome {
  ReportRow row;
  std::optional<ExtReal> oracle;
};

MeshOutcome run_mesh(const ContinuousProblem& cp, MeshSpec mesh, SolveOptions opts, double cert_tol,
                     std::size_t oracle_budget) {
  MeshOutcome out;
  out.row.delta = mesh.delta();
  opts.rng_seed = opts.rng_seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(mesh.K()));
  try {
    const DiscreteProblem p = build_pda(cp, mesh);
    const PrimalSolution ps = solve_primal(p, opts);
    const DualSolution ds = solve_dual(p, opts);
    const CertificateReport cert = certify(p, ps, ds.variables(), cert_tol);
    out.row = make_row(mesh.delta(), ps, ds, cert);

    const auto& F = p.semilinear();
    double size = static_cast<double>(set_grid(p.Q0, opts.grid_resolution).size()) *
                  static_cast<double>(set_grid(p.Q1, opts.grid_resolution).size()) *
                  std::pow(static_cast<double>(set_grid(F.U, opts.grid_resolution).size()), p.N - 1);
    if (size <= static_cast<double>(oracle_budget)) out.oracle = brute_primal(p, opts).value;
  } catch (const std::exception& e) {
    out.row.error = e.what();
  }
  return out;
}

}  // namespace

SweepReport cmd_sweep(const ContinuousProblem& cp, const std::vector<MeshSpec>& deltas, const SolveOptions& opts,
                      std::optional<double> reference, double cert_tol, std::size_t oracle_budget) {
  cp.validate();
  opts.validate();
  std::vector<MeshSpec> meshes = deltas;
  std::stable_sort(meshes.begin(), meshes.end(), [](const MeshSpec& a, const MeshSpec& b) { return a.K() < b.K(); });

  std::vector<std::future<MeshOutcome>> jobs;
  for (const auto& m : meshes) {
    jobs.push_back(std::async(std::launch::async, run_mesh, std::cref(cp), m, opts, cert_tol, oracle_budget));
  }
  SweepReport rep;
  rep.reference = reference;
  std::vector<double> ds, errs;
  for (auto& j : jobs) {
    MeshOutcome o = j.get();
    if (reference && o.row.error.empty() && o.row.primal.is_finite()) {
      ds.push_back(*o.row.delta);
      errs.push_back(std::abs(o.row.primal.value() - *reference));
    }
    rep.rows.push_back(std::move(o.row));
    rep.oracle.push_back(o.oracle);
  }
  if (reference) rep.order = empirical_order(ds, errs);
  return rep;
}

}  // namespace incdual
