#ifndef SQGAD_SQGAD_H
#define SQGAD_SQGAD_H

/* C interface to the sqgad library.
 *
 * Every function returns an sqg_status; results come back through out
 * parameters.  On failure sqg_last_error() holds a message for the calling
 * thread.  Handles are opaque and released with their _free function;
 * passing NULL to a _free function is a no-op.  Strings returned by the
 * library stay valid until the owning handle is freed. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(SQGAD_BUILDING)
#    define SQGAD_API __declspec(dllexport)
#  else
#    define SQGAD_API __declspec(dllimport)
#  endif
#else
#  define SQGAD_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sqg_status {
  SQG_OK = 0,
  SQG_INVALID_ARGUMENT = 1,
  SQG_PRECONDITION_VIOLATED = 2,
  SQG_SINGULAR_SYMBOL = 3,
  SQG_EMPTY_BAND = 4,
  SQG_NON_FINITE = 5,
  SQG_QUADRATURE_NO_CONVERGENCE = 6,
  SQG_ZERO_FIELD = 7,
  SQG_DEGENERATE_SYSTEM = 8,
  SQG_HYPOTHESIS_VIOLATED = 9,
  SQG_INSUFFICIENT_SAMPLES = 10,
  SQG_NON_POSITIVE_VALUE = 11,
  SQG_IO = 12,
  SQG_CONFIG = 13,
  SQG_NULL_POINTER = 100,
  SQG_BUFFER_TOO_SMALL = 101,
  SQG_OUT_OF_RANGE = 102,
  SQG_INTERNAL = 199
} sqg_status;

SQGAD_API const char* sqg_version(void);
SQGAD_API const char* sqg_status_name(sqg_status status);
/* Message of the last failed call on this thread; "" if none. */
SQGAD_API const char* sqg_last_error(void);

/* Named substream of a root seed. */
SQGAD_API uint64_t sqg_derive_seed(uint64_t seed, const char* stream);

/* ---- theory ---------------------------------------------------------- */

typedef enum sqg_region_branch {
  SQG_BRANCH_LOW_ALPHA = 0,
  SQG_BRANCH_HIGH_ALPHA = 1,
  SQG_BRANCH_COMPLEMENT = 2
} sqg_region_branch;

SQGAD_API sqg_status sqg_regularity_region(double alpha, double beta, int* admissible,
                                           sqg_region_branch* branch);
SQGAD_API sqg_status sqg_decay_exponent(double alpha, double beta, double s, double p,
                                        double* out);
SQGAD_API sqg_status sqg_difference_exponent(double alpha, double beta, double p, double* out);
SQGAD_API sqg_status sqg_difference_exponent_l2only(double alpha, double beta, double* out);
SQGAD_API sqg_status sqg_difference_critical_p(double alpha, double beta, double* out);
SQGAD_API sqg_status sqg_critical_exponent(double s, double p, double* out);
SQGAD_API sqg_status sqg_small_data_order(double alpha, double beta, double* out);

/* ---- fields ---------------------------------------------------------- */

typedef struct sqg_grid_desc {
  int n1;
  int n2;
  double l1;
  double l2;
  double dealias_fraction;
} sqg_grid_desc;

/* 64 x 64 on [0, 2pi)^2 with the 2/3 rule. */
SQGAD_API void sqg_grid_default(sqg_grid_desc* grid);

typedef struct sqg_field sqg_field;

SQGAD_API sqg_status sqg_field_zero(const sqg_grid_desc* grid, sqg_field** out);
SQGAD_API sqg_status sqg_field_random(const sqg_grid_desc* grid, uint64_t seed, double k_lo,
                                      double k_hi, double slope, double l2_norm,
                                      sqg_field** out);
SQGAD_API sqg_status sqg_field_single_mode(const sqg_grid_desc* grid, int m1, int m2,
                                           double amplitude, double phase, sqg_field** out);
SQGAD_API sqg_status sqg_field_load(const char* path, sqg_field** out);
SQGAD_API sqg_status sqg_field_save(const sqg_field* field, const char* path);
SQGAD_API void sqg_field_free(sqg_field* field);

SQGAD_API sqg_status sqg_field_grid(const sqg_field* field, sqg_grid_desc* out);
/* Interleaved (re, im) pairs in row-major order, axis-1 index slow.
 * capacity counts doubles; *count receives n1*n2 even when the buffer is
 * too small.  set_coeffs takes count = n1*n2 pairs. */
SQGAD_API sqg_status sqg_field_coeffs(const sqg_field* field, double* re_im, size_t capacity,
                                      size_t* count);
SQGAD_API sqg_status sqg_field_set_coeffs(sqg_field* field, const double* re_im, size_t count);

typedef enum sqg_norm_kind {
  SQG_NORM_SOBOLEV = 0,  /* param: s */
  SQG_NORM_LP = 1,       /* param: p, INFINITY for the sup norm */
  SQG_NORM_AXIS1 = 2,    /* param: gamma */
  SQG_NORM_AXIS2 = 3     /* param: gamma */
} sqg_norm_kind;

SQGAD_API sqg_status sqg_field_norm(const sqg_field* field, sqg_norm_kind kind, double param,
                                    double* out);
/* Exact linear flow exp(-t lambda) applied to the field. */
SQGAD_API sqg_status sqg_field_evolve_linear(const sqg_field* field, double alpha, double beta,
                                             double t, sqg_field** out);

/* ---- time integration ------------------------------------------------ */

typedef enum sqg_scheme { SQG_SCHEME_IF_RK4 = 0, SQG_SCHEME_IF_EULER = 1 } sqg_scheme;

typedef struct sqg_solver_config {
  double alpha;
  double beta;
  double dt;
  double t_end;
  sqg_scheme scheme;
  size_t sample_count; /* evenly spaced, both ends included */
  int nonlinear;
  int fixed_dt;
  double cfl;
} sqg_solver_config;

SQGAD_API void sqg_solver_config_default(sqg_solver_config* cfg);

typedef struct sqg_trajectory sqg_trajectory;

/* Records the L^p norms for lp[0..n_lp) and H^s norms for hs[0..n_hs). */
SQGAD_API sqg_status sqg_evolve(const sqg_field* theta0, const sqg_solver_config* cfg,
                                const double* lp, size_t n_lp, const double* hs, size_t n_hs,
                                sqg_trajectory** out);
SQGAD_API void sqg_trajectory_free(sqg_trajectory* traj);

SQGAD_API size_t sqg_trajectory_rows(const sqg_trajectory* traj);
SQGAD_API size_t sqg_trajectory_columns(const sqg_trajectory* traj);
SQGAD_API const char* sqg_trajectory_column_name(const sqg_trajectory* traj, size_t column);
SQGAD_API sqg_status sqg_trajectory_column(const sqg_trajectory* traj, size_t column,
                                           double* out, size_t capacity);
SQGAD_API const char* sqg_trajectory_csv(const sqg_trajectory* traj);
/* Relative energy-identity residual per sample interval (rows - 1 values). */
SQGAD_API sqg_status sqg_trajectory_energy_residuals(const sqg_trajectory* traj, double* out,
                                                     size_t capacity, size_t* count);
/* max_t ||theta(t)||_p / ||theta0||_p for a recorded exponent. */
SQGAD_API sqg_status sqg_trajectory_lp_ratio(const sqg_trajectory* traj, double p,
                                             double* out);

/* ---- batch commands -------------------------------------------------- */

typedef struct sqg_report sqg_report;

/* Names of the batch commands, index 0 .. sqg_command_count()-1. */
SQGAD_API size_t sqg_command_count(void);
SQGAD_API const char* sqg_command_name(size_t index);
/* JSON description of the configuration keys of a command; the string lives
 * for the lifetime of the process. */
SQGAD_API sqg_status sqg_command_schema(const char* command, const char** json);

/* Runs a command with a flat JSON object of configuration keys (NULL or ""
 * for all defaults).  A failing verdict is not an error: check
 * sqg_report_passed. */
SQGAD_API sqg_status sqg_run(const char* command, const char* config_json, sqg_report** out);
SQGAD_API void sqg_report_free(sqg_report* report);

SQGAD_API int sqg_report_passed(const sqg_report* report);
/* Summary: command, version, pass, resolved config, verdicts, failures,
 * results. */
SQGAD_API const char* sqg_report_json(const sqg_report* report);
SQGAD_API size_t sqg_report_artifact_count(const sqg_report* report);
SQGAD_API const char* sqg_report_artifact_name(const sqg_report* report, size_t index);
/* Artifact bytes; snapshots are binary so use *size. */
SQGAD_API const char* sqg_report_artifact_data(const sqg_report* report, size_t index,
                                               size_t* size);

#ifdef __cplusplus
}
#endif

#endif
