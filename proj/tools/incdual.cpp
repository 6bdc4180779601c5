#include <CLI11.hpp>

#include <charconv>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "incdual/incdual.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kCertFail = 3, kBudget = 4 };

int exit_for(incdual_status s) { return s == INCDUAL_E_BUDGET ? kBudget : kValidation; }

int report_error(incdual_status s) {
  std::cerr << "incdual: " << incdual_status_name(s) << ": " << incdual_last_error() << "\n";
  return exit_for(s);
}

bool emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return true;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "incdual: cannot write '" << out_path << "'\n";
    return false;
  }
  f << text;
  return static_cast<bool>(f);
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    out.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Second-order discrete inclusions: primal/dual solvers and duality certificates", "incdual"};
  app.require_subcommand(1);

  incdual_options opts;
  incdual_options_default(&opts);
  std::string problem_path, out_path, format = "text", primal_path, dual_path, in_list;
  double delta = 0.0;
  int pascal = 0;

  auto add_common = [&](CLI::App* sub, bool needs_file) {
    sub->add_option("--tol", opts.tol, "certificate tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--seed", opts.seed, "random seed");
    sub->add_option("--max-iter", opts.max_iter, "iterations per restart")->check(CLI::PositiveNumber);
    sub->add_option("--grid", opts.grid, "oracle grid points per axis")->check(CLI::PositiveNumber);
    sub->add_option("--out", out_path, "write the report to this file");
    sub->add_option("--format", format, "csv or text")->check(CLI::IsMember({"csv", "text"}));
    sub->add_option("--delta", delta, "mesh step for continuous problems");
    auto* file = sub->add_option("problem-file", problem_path, "problem file (JSON)");
    if (needs_file) file->required();
  };

  auto* solve = app.add_subcommand("solve", "minimize the primal problem");
  auto* dual = app.add_subcommand("dual", "maximize the reduced dual");
  auto* cert = app.add_subcommand("certify", "check optimality conditions and the duality gap");
  auto* sweep = app.add_subcommand("sweep", "mesh refinement study for a continuous problem");
  auto* conj = app.add_subcommand("conjugate", "evaluate conjugates, lifted conjugates, Pascal transforms");
  auto* oracle = app.add_subcommand("oracle", "brute-force primal and dual enumeration");
  for (auto* s : {solve, dual, cert, sweep, oracle}) add_common(s, true);
  add_common(conj, false);
  cert->add_option("--primal", primal_path, "primal file {x0, x1, controls}");
  cert->add_option("--dual", dual_path, "dual file {xstar, mustar}");
  conj->add_option("--pascal", pascal, "Pascal transform order")->check(CLI::Range(1, 20));
  conj->add_option("--in", in_list, "comma-separated input values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  opts.format = format == "csv" ? INCDUAL_FORMAT_CSV : INCDUAL_FORMAT_TEXT;
  if (app.got_subcommand(conj) ? conj->count("--delta") : app.get_subcommands().front()->count("--delta")) {
    opts.has_delta = 1;
    opts.delta = delta;
  }
  if (!primal_path.empty()) opts.primal_path = primal_path.c_str();
  if (!dual_path.empty()) opts.dual_path = dual_path.c_str();

  incdual_result* result = nullptr;
  incdual_status st = INCDUAL_OK;

  if (app.got_subcommand(conj)) {
    if (pascal > 0) {
      if (!opts.has_delta || in_list.empty()) {
        std::cerr << "incdual: --pascal needs --delta and --in\n";
        return kUsage;
      }
      std::vector<double> in;
      try {
        in = parse_list(in_list);
      } catch (const std::exception&) {
        std::cerr << "incdual: --in expects comma-separated numbers\n";
        return kUsage;
      }
      std::vector<double> res(in.size());
      st = incdual_pascal(pascal, delta, in.data(), in.size(), res.data());
      if (st != INCDUAL_OK) return report_error(st);
      std::ostringstream os;
      for (std::size_t i = 0; i < res.size(); ++i) {
        char buf[64];
        const auto r = std::to_chars(buf, buf + sizeof buf, res[i] == 0.0 ? 0.0 : res[i]);
        os << (i ? "," : "") << std::string_view(buf, static_cast<std::size_t>(r.ptr - buf));
      }
      os << "\n";
      return emit(os.str(), out_path) ? kOk : kValidation;
    }
    if (problem_path.empty()) {
      std::cerr << "incdual: conjugate needs an expression file or --pascal\n" << conj->help();
      return kUsage;
    }
    st = incdual_conjugate_file(problem_path.c_str(), &opts, &result);
  } else {
    incdual_problem* problem = nullptr;
    st = incdual_problem_load(problem_path.c_str(), &problem);
    if (st != INCDUAL_OK) return report_error(st);
    if (app.got_subcommand(solve)) {
      st = incdual_solve(problem, &opts, &result);
    } else if (app.got_subcommand(dual)) {
      st = incdual_dual(problem, &opts, &result);
    } else if (app.got_subcommand(cert)) {
      st = incdual_certify(problem, &opts, &result);
    } else if (app.got_subcommand(sweep)) {
      st = incdual_sweep(problem, &opts, &result);
    } else {
      st = incdual_oracle(problem, &opts, &result);
    }
    incdual_problem_free(problem);
  }
  if (st != INCDUAL_OK) return report_error(st);

  const bool written = emit(incdual_result_output(result), out_path);
  const int status = incdual_result_status(result);
  incdual_result_free(result);
  if (!written) return kValidation;
  return status;
}
