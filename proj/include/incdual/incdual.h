#ifndef INCDUAL_H
#define INCDUAL_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define INCDUAL_API __declspec(dllexport)
#else
#define INCDUAL_API __attribute__((visibility("default")))
#endif

typedef enum incdual_status {
  INCDUAL_OK = 0,
  INCDUAL_E_DIMENSION = 1,
  INCDUAL_E_ARGUMENT = 2,
  INCDUAL_E_UNSUPPORTED = 3,
  INCDUAL_E_NOT_IN_DOMAIN = 4,
  INCDUAL_E_INDETERMINATE = 5,
  INCDUAL_E_BUDGET = 6,
  INCDUAL_E_PARSE = 7,
  INCDUAL_E_SCHEMA = 8,
  INCDUAL_E_SEMANTIC = 9,
  INCDUAL_E_IO = 10,
  INCDUAL_E_INTERNAL = 11
} incdual_status;

typedef enum incdual_format { INCDUAL_FORMAT_TEXT = 0, INCDUAL_FORMAT_CSV = 1 } incdual_format;

typedef struct incdual_options {
  int max_iter;
  double step0;
  double tol; /* certificate tolerance */
  int restarts;
  uint64_t seed;
  int grid;
  incdual_format format;
  int has_delta;
  double delta;
  const char* primal_path; /* certify: NULL to solve */
  const char* dual_path;   /* certify: NULL to solve */
} incdual_options;

typedef struct incdual_problem incdual_problem;
typedef struct incdual_result incdual_result;

INCDUAL_API void incdual_options_default(incdual_options* opts);

/* Message of the last failed call on this thread ("" if none). */
INCDUAL_API const char* incdual_last_error(void);
INCDUAL_API const char* incdual_status_name(incdual_status s);

INCDUAL_API incdual_status incdual_problem_parse(const char* text, incdual_problem** out);
INCDUAL_API incdual_status incdual_problem_load(const char* path, incdual_problem** out);
INCDUAL_API void incdual_problem_free(incdual_problem* p);
/* 0 discrete, 1 continuous. */
INCDUAL_API int incdual_problem_kind(const incdual_problem* p);
INCDUAL_API int incdual_problem_dim(const incdual_problem* p);
/* JSON re-serialization; caller frees with incdual_string_free. */
INCDUAL_API incdual_status incdual_problem_emit(const incdual_problem* p, char** out);
INCDUAL_API void incdual_string_free(char* s);

INCDUAL_API incdual_status incdual_solve(const incdual_problem* p, const incdual_options* opts, incdual_result** out);
INCDUAL_API incdual_status incdual_dual(const incdual_problem* p, const incdual_options* opts, incdual_result** out);
INCDUAL_API incdual_status incdual_certify(const incdual_problem* p, const incdual_options* opts,
                                           incdual_result** out);
INCDUAL_API incdual_status incdual_sweep(const incdual_problem* p, const incdual_options* opts, incdual_result** out);
INCDUAL_API incdual_status incdual_oracle(const incdual_problem* p, const incdual_options* opts, incdual_result** out);
/* Evaluates a conjugate expression file. */
INCDUAL_API incdual_status incdual_conjugate_file(const char* path, const incdual_options* opts,
                                                  incdual_result** out);

/* Rendered report (text or CSV). */
INCDUAL_API const char* incdual_result_output(const incdual_result* r);
/* Headline number: primal/dual value, certificate gap, sweep order. */
INCDUAL_API double incdual_result_value(const incdual_result* r);
/* 1 when the run converged / the certificate passed. */
INCDUAL_API int incdual_result_ok(const incdual_result* r);
/* 0 ok, 3 certificate FAIL, 4 iteration budget exhausted. */
INCDUAL_API int incdual_result_status(const incdual_result* r);
INCDUAL_API void incdual_result_free(incdual_result* r);

/* out[j*n + k] = delta^j * sum_{i >= j} C(i, j) in[i*n + k], len = (order + 1) * n. */
INCDUAL_API incdual_status incdual_pascal(int order, double delta, const double* in, size_t len, double* out);

/* Support function of a box [lower, upper] in R^dim at direction d. */
INCDUAL_API incdual_status incdual_box_support(const double* lower, const double* upper, const double* d, size_t dim,
                                               double* out);

#ifdef __cplusplus
}
#endif

#endif
