/* C interface to the deformed-entropy divergence library.
 *
 * Every object-returning call hands back an opaque handle the caller must
 * destroy with the matching *_destroy function.  Calls that can fail return a
 * dsgm_status_t; on failure the thread-local message from dsgm_last_error()
 * describes what went wrong and the output arguments are untouched.
 */
#ifndef DSGM_H
#define DSGM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dsgm_status {
  DSGM_OK = 0,
  DSGM_ERR_DOMAIN = 1,           /* parameter outside its documented domain */
  DSGM_ERR_EVAL = 2,             /* expression singular or undefined at the input */
  DSGM_ERR_LENGTH = 3,           /* mismatched vector lengths */
  DSGM_ERR_UNSUPPORTED = 4,      /* combination deliberately not provided */
  DSGM_ERR_DEGENERATE = 5,       /* forward model left the divergence domain */
  DSGM_ERR_LINESEARCH = 6,       /* line search or preconditioner broke down */
  DSGM_ERR_INVALID_ARGUMENT = 7, /* null pointer or out-of-range enum */
  DSGM_ERR_INTERNAL = 8,
} dsgm_status_t;

const char* dsgm_status_name(dsgm_status_t status);

/* Message for the most recent failure on this thread; empty when the last
 * call succeeded. */
const char* dsgm_last_error(void);

typedef struct dsgm_family dsgm_family_t;
typedef struct dsgm_spec dsgm_spec_t;
typedef struct dsgm_operator dsgm_operator_t;
typedef struct dsgm_result dsgm_result_t;

/* --- entropy families ----------------------------------------------------- */

/* Parse a family from text, e.g. "shannon", "tsallis t=1.5",
 * "kaniadakis k=0.4", "abe z=2", "gamma g=0.5", "kls k=0.4 r=0.2",
 * "general a=1.5 b=0.5", "newton", "alpha alpha=0.25". */
dsgm_status_t dsgm_family_parse(const char* text, dsgm_family_t** out);
void dsgm_family_destroy(dsgm_family_t* family);

/* Exponent pair of the two-power kernel.  *reducible is set to 0 for the
 * families without one (newton, alpha); a and b are written otherwise. */
dsgm_status_t dsgm_family_to_ab(const dsgm_family_t* family, double* a, double* b,
                                int* reducible);

dsgm_status_t dsgm_family_f(const dsgm_family_t* family, double x, double* out);
dsgm_status_t dsgm_family_f_prime(const dsgm_family_t* family, double x, double* out);
dsgm_status_t dsgm_family_f_second(const dsgm_family_t* family, double x, double* out);
dsgm_status_t dsgm_family_f_standard(const dsgm_family_t* family, double x, double* out);
dsgm_status_t dsgm_family_deformed_log(const dsgm_family_t* family, double x, double* out);

/* Newline-joined non-fatal diagnostics.  Writes up to cap - 1 bytes plus a
 * terminator and stores the full required size (including the terminator) in
 * *needed; call with cap 0 to size the buffer. */
dsgm_status_t dsgm_family_diagnostics(const dsgm_family_t* family, char* buf, size_t cap,
                                      size_t* needed);

/* --- divergence specs ------------------------------------------------------ */

typedef enum dsgm_form {
  DSGM_FORM_CSISZAR = 0,
  DSGM_FORM_CSISZAR_DUAL = 1,
  DSGM_FORM_BREGMAN = 2,
  DSGM_FORM_BREGMAN_DUAL = 3,
} dsgm_form_t;

typedef enum dsgm_variant {
  DSGM_VARIANT_PLAIN = 0,
  DSGM_VARIANT_INVARIANT = 1,
} dsgm_variant_t;

typedef enum dsgm_factor {
  DSGM_FACTOR_REFERENCE = 0,
  DSGM_FACTOR_NOMINAL_TSALLIS = 1,
} dsgm_factor_t;

dsgm_status_t dsgm_spec_create(const dsgm_family_t* family, dsgm_form_t form,
                               dsgm_variant_t variant, dsgm_factor_t factor,
                               dsgm_spec_t** out);
void dsgm_spec_destroy(dsgm_spec_t* spec);

/* --- divergence evaluation -------------------------------------------------
 * p and q have length n; gradient buffers have length n. */

dsgm_status_t dsgm_divergence_value(const dsgm_spec_t* spec, const double* p, const double* q,
                                    size_t n, double* out);
dsgm_status_t dsgm_divergence_neg_grad(const dsgm_spec_t* spec, const double* p,
                                       const double* q, size_t n, double* out_grad);
/* out_u - out_v equals the negative gradient; both parts are non-negative. */
dsgm_status_t dsgm_divergence_neg_grad_split(const dsgm_spec_t* spec, const double* p,
                                             const double* q, size_t n, double* out_u,
                                             double* out_v);
/* Independent closed-form gradient path for cross-checking (plain variant). */
dsgm_status_t dsgm_tabulated_neg_grad(const dsgm_spec_t* spec, const double* p,
                                      const double* q, size_t n, double* out_grad);

/* --- invariance factors ----------------------------------------------------- */

typedef enum dsgm_factor_kind {
  DSGM_KIND_REFERENCE = 0,
  DSGM_KIND_CSISZAR_NOMINAL = 1,
  DSGM_KIND_CSISZAR_DUAL_NOMINAL = 2,
  DSGM_KIND_BREGMAN_NOMINAL = 3,
  DSGM_KIND_BREGMAN_DUAL_NOMINAL = 4,
} dsgm_factor_kind_t;

dsgm_status_t dsgm_invariance_factor(dsgm_factor_kind_t kind, const dsgm_family_t* family,
                                     const double* p, const double* q, size_t n, double* out);
/* d D(p, K q)/dK at the factor above; near zero for the nominal kinds. */
dsgm_status_t dsgm_stationarity_residual(dsgm_factor_kind_t kind, const dsgm_family_t* family,
                                         const double* p, const double* q, size_t n,
                                         double* out);

/* --- linear operators ------------------------------------------------------- */

typedef enum dsgm_boundary {
  DSGM_BOUNDARY_ZERO_PAD = 0,
  DSGM_BOUNDARY_PERIODIC = 1,
} dsgm_boundary_t;

/* entries row-major, length rows*cols, non-negative */
dsgm_status_t dsgm_operator_create_dense(size_t rows, size_t cols, const double* entries,
                                         dsgm_operator_t** out);
dsgm_status_t dsgm_operator_create_conv1d(const double* kernel, size_t kernel_len, size_t n,
                                          dsgm_boundary_t boundary, dsgm_operator_t** out);
size_t dsgm_operator_rows(const dsgm_operator_t* op);
size_t dsgm_operator_cols(const dsgm_operator_t* op);
/* x has length cols, out_q length rows */
dsgm_status_t dsgm_operator_forward(const dsgm_operator_t* op, const double* x, size_t n,
                                    double* out_q);
/* g has length rows, out length cols */
dsgm_status_t dsgm_operator_adjoint(const dsgm_operator_t* op, const double* g, size_t m,
                                    double* out);
void dsgm_operator_destroy(dsgm_operator_t* op);

/* Negative gradient of x -> D(p, Hx), length n = cols; m = rows. */
dsgm_status_t dsgm_neg_grad_x(const dsgm_spec_t* spec, const dsgm_operator_t* op,
                              const double* p, size_t m, const double* x, size_t n,
                              double* out);

/* --- solver ------------------------------------------------------------------ */

typedef enum dsgm_mode {
  DSGM_MODE_ADDITIVE = 0,
  DSGM_MODE_PRECONDITIONED = 1,
  DSGM_MODE_MULTIPLICATIVE = 2,
} dsgm_mode_t;

typedef enum dsgm_stop {
  DSGM_STOP_GRAD_TOL = 0,
  DSGM_STOP_VALUE_TOL = 1,
  DSGM_STOP_MAX_ITERS = 2,
  DSGM_STOP_DEGENERATE = 3,
} dsgm_stop_t;

typedef struct dsgm_solver_options {
  dsgm_mode_t mode;
  size_t max_iters;
  double grad_tol;
  double value_tol;
  double armijo_c;
  double backtrack_ratio;
  double step_safety;
  int has_sum_constraint;
  double sum_constraint;
} dsgm_solver_options_t;

void dsgm_solver_options_default(dsgm_solver_options_t* opts);

typedef struct dsgm_trace_row {
  size_t iter;
  double value;
  double grad_norm;
  double alpha;
  double sum_x;
  double min_x;
} dsgm_trace_row_t;

/* Minimise D(p, Hx) from the strictly positive start x0 (length n = cols,
 * p length m = rows). */
dsgm_status_t dsgm_solve(const dsgm_spec_t* spec, const dsgm_operator_t* op, const double* p,
                         size_t m, const double* x0, size_t n,
                         const dsgm_solver_options_t* opts, dsgm_result_t** out);
dsgm_status_t dsgm_result_x(const dsgm_result_t* result, double* out, size_t n);
size_t dsgm_result_trace_size(const dsgm_result_t* result);
dsgm_status_t dsgm_result_trace(const dsgm_result_t* result, size_t index,
                                dsgm_trace_row_t* out);
dsgm_stop_t dsgm_result_status(const dsgm_result_t* result);
void dsgm_result_destroy(dsgm_result_t* result);

/* --- synthetic problems -------------------------------------------------------
 * Deterministic deconvolution instance.  out_x_true, out_p, out_x0 have
 * length n; out_kernel has length kernel_width. */
dsgm_status_t dsgm_synth_problem(size_t n, uint64_t seed, size_t kernel_width, int poisson,
                                 double noise_scale, double* out_x_true, double* out_kernel,
                                 double* out_p, double* out_x0);

#ifdef __cplusplus
}
#endif

#endif /* DSGM_H */
