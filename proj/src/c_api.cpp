#include "incdual/incdual.h"

#include <cstring>
#include <new>
#include <string>

#include "incdual/commands.hpp"

struct incdual_problem {
  incdual::ProblemFile file;
};

struct incdual_result {
  incdual::CommandResult res;
};

namespace {

thread_local std::string g_last_error;

incdual_status to_status(incdual::ErrorCode c) {
  using incdual::ErrorCode;
  switch (c) {
    case ErrorCode::kDimensionMismatch:
      return INCDUAL_E_DIMENSION;
    case ErrorCode::kInvalidArgument:
      return INCDUAL_E_ARGUMENT;
    case ErrorCode::kUnsupported:
      return INCDUAL_E_UNSUPPORTED;
    case ErrorCode::kNotInDomain:
      return INCDUAL_E_NOT_IN_DOMAIN;
    case ErrorCode::kIndeterminate:
      return INCDUAL_E_INDETERMINATE;
    case ErrorCode::kBudgetExceeded:
      return INCDUAL_E_BUDGET;
    case ErrorCode::kParse:
      return INCDUAL_E_PARSE;
    case ErrorCode::kSchema:
      return INCDUAL_E_SCHEMA;
    case ErrorCode::kSemantic:
      return INCDUAL_E_SEMANTIC;
    case ErrorCode::kIo:
      return INCDUAL_E_IO;
  }
  return INCDUAL_E_INTERNAL;
}

template <class F>
incdual_status guard(F&& f) {
  try {
    g_last_error.clear();
    f();
    return INCDUAL_OK;
  } catch (const incdual::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  }
  return INCDUAL_E_INTERNAL;
}

incdual::CommandOptions convert(const incdual_options* o) {
  incdual::CommandOptions c;
  if (!o) return c;
  c.solve.max_iter = o->max_iter;
  c.solve.step0 = o->step0;
  c.solve.restarts = o->restarts;
  c.solve.rng_seed = o->seed;
  c.solve.grid_resolution = o->grid;
  c.cert_tol = o->tol;
  if (!(o->tol > 0.0)) incdual::fail(incdual::ErrorCode::kInvalidArgument, "tol must be > 0");
  c.solve.validate();
  c.format = o->format == INCDUAL_FORMAT_CSV ? incdual::OutputFormat::kCsv : incdual::OutputFormat::kText;
  if (o->has_delta) c.delta = o->delta;
  if (o->primal_path) c.primal_path = o->primal_path;
  if (o->dual_path) c.dual_path = o->dual_path;
  return c;
}

template <class Run>
incdual_status run_command(const incdual_problem* p, const incdual_options* opts, incdual_result** out, Run run) {
  if (!p || !out) {
    g_last_error = "null argument";
    return INCDUAL_E_ARGUMENT;
  }
  *out = nullptr;
  return guard([&] { *out = new incdual_result{run(p->file, convert(opts))}; });
}

}  // namespace

extern "C" {

void incdual_options_default(incdual_options* opts) {
  if (!opts) return;
  const incdual::SolveOptions s;
  opts->max_iter = s.max_iter;
  opts->step0 = s.step0;
  opts->tol = incdual::kDefaultCertTol;
  opts->restarts = s.restarts;
  opts->seed = s.rng_seed;
  opts->grid = s.grid_resolution;
  opts->format = INCDUAL_FORMAT_TEXT;
  opts->has_delta = 0;
  opts->delta = 0.0;
  opts->primal_path = nullptr;
  opts->dual_path = nullptr;
}

const char* incdual_last_error(void) { return g_last_error.c_str(); }

const char* incdual_status_name(incdual_status s) {
  switch (s) {
    case INCDUAL_OK:
      return "ok";
    case INCDUAL_E_DIMENSION:
      return "dimension mismatch";
    case INCDUAL_E_ARGUMENT:
      return "invalid argument";
    case INCDUAL_E_UNSUPPORTED:
      return "unsupported";
    case INCDUAL_E_NOT_IN_DOMAIN:
      return "not in domain";
    case INCDUAL_E_INDETERMINATE:
      return "indeterminate";
    case INCDUAL_E_BUDGET:
      return "budget exceeded";
    case INCDUAL_E_PARSE:
      return "parse error";
    case INCDUAL_E_SCHEMA:
      return "schema error";
    case INCDUAL_E_SEMANTIC:
      return "validation error";
    case INCDUAL_E_IO:
      return "i/o error";
    case INCDUAL_E_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

incdual_status incdual_problem_parse(const char* text, incdual_problem** out) {
  if (!text || !out) {
    g_last_error = "null argument";
    return INCDUAL_E_ARGUMENT;
  }
  *out = nullptr;
  return guard([&] { *out = new incdual_problem{incdual::parse_problem(text)}; });
}

incdual_status incdual_problem_load(const char* path, incdual_problem** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return INCDUAL_E_ARGUMENT;
  }
  *out = nullptr;
  return guard([&] {
    try {
      *out = new incdual_problem{incdual::parse_problem(incdual::read_file(path))};
    } catch (const incdual::Error& e) {
      if (e.code() == incdual::ErrorCode::kIo) throw;
      throw incdual::Error(e.code(), std::string(path) + ": " + e.what());
    }
  });
}

void incdual_problem_free(incdual_problem* p) { delete p; }

int incdual_problem_kind(const incdual_problem* p) {
  return p && p->file.kind == incdual::ProblemKind::kContinuous ? 1 : 0;
}

int incdual_problem_dim(const incdual_problem* p) {
  if (!p) return 0;
  return p->file.discrete ? p->file.discrete->n : p->file.continuous->n;
}

incdual_status incdual_problem_emit(const incdual_problem* p, char** out) {
  if (!p || !out) {
    g_last_error = "null argument";
    return INCDUAL_E_ARGUMENT;
  }
  *out = nullptr;
  return guard([&] {
    const std::string s = incdual::emit(p->file);
    char* buf = new char[s.size() + 1];
    std::memcpy(buf, s.c_str(), s.size() + 1);
    *out = buf;
  });
}

void incdual_string_free(char* s) { delete[] s; }

incdual_status incdual_solve(const incdual_problem* p, const incdual_options* opts, incdual_result** out) {
  return run_command(p, opts, out, incdual::run_solve);
}

incdual_status incdual_dual(const incdual_problem* p, const incdual_options* opts, incdual_result** out) {
  return run_command(p, opts, out, incdual::run_dual);
}

incdual_status incdual_certify(const incdual_problem* p, const incdual_options* opts, incdual_result** out) {
  return run_command(p, opts, out, incdual::run_certify);
}

incdual_status incdual_sweep(const incdual_problem* p, const incdual_options* opts, incdual_result** out) {
  return run_command(p, opts, out, incdual::run_sweep);
}

incdual_status incdual_oracle(const incdual_problem* p, const incdual_options* opts, incdual_result** out) {
  return run_command(p, opts, out, incdual::run_oracle);
}

incdual_status incdual_conjugate_file(const char* path, const incdual_options* opts, incdual_result** out) {
  if (!path || !out) {
    g_last_error = "null argument";
    return INCDUAL_E_ARGUMENT;
  }
  *out = nullptr;
  return guard([&] {
    const auto queries = incdual::parse_conjugate_queries(incdual::read_file(path));
    *out = new incdual_result{incdual::run_conjugate(queries, convert(opts))};
  });
}

const char* incdual_result_output(const incdual_result* r) { return r ? r->res.output.c_str() : ""; }

double incdual_result_value(const incdual_result* r) { return r ? r->res.value.value() : 0.0; }

int incdual_result_ok(const incdual_result* r) {
  return r && r->res.passed && r->res.status == incdual::CommandStatus::kOk ? 1 : 0;
}

int incdual_result_status(const incdual_result* r) { return r ? static_cast<int>(r->res.status) : 0; }

void incdual_result_free(incdual_result* r) { delete r; }

incdual_status incdual_pascal(int order, double delta, const double* in, size_t len, double* out) {
  if (!in || !out) {
    g_last_error = "null argument";
    return INCDUAL_E_ARGUMENT;
  }
  return guard([&] {
    const auto res = incdual::pascal_flat(order, delta, std::vector<double>(in, in + len));
    std::copy(res.begin(), res.end(), out);
  });
}

incdual_status incdual_box_support(const double* lower, const double* upper, const double* d, size_t dim,
                                   double* out) {
  if (!lower || !upper || !d || !out || dim == 0) {
    g_last_error = "null argument";
    return INCDUAL_E_ARGUMENT;
  }
  return guard([&] {
    const long n = static_cast<long>(dim);
    const auto box = incdual::ConvexSet::box(Eigen::Map<const incdual::Vector>(lower, n),
                                             Eigen::Map<const incdual::Vector>(upper, n));
    *out = box.support(Eigen::Map<const incdual::Vector>(d, n));
  });
}

}  // extern "C"
