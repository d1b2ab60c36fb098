#include "dsgm/dsgm.h"

#include <algorithm>
#include <cstring>
#include <new>
#include <string>

#include "core/divergence.hpp"
#include "core/entropy.hpp"
#include "core/error.hpp"
#include "core/invariance.hpp"
#include "core/linear_model.hpp"
#include "core/solver.hpp"
#include "core/synth.hpp"
#include "core/vec.hpp"

struct dsgm_family {
  dsgm::EntropyFamily family;
};

struct dsgm_spec {
  dsgm::DivergenceSpec spec;
};

struct dsgm_operator {
  std::shared_ptr<const dsgm::LinearOperator> op;
};

struct dsgm_result {
  dsgm::SolveResult result;
};

namespace {

thread_local std::string g_last_error;

void set_error(const char* msg) { g_last_error = msg; }

// Runs fn, translating C++ exceptions into status codes and the thread-local
// message.  Output arguments are only written on the success path.
template <typename Fn>
dsgm_status_t guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return DSGM_OK;
  } catch (const dsgm::DomainError& e) {
    set_error(e.what());
    return DSGM_ERR_DOMAIN;
  } catch (const dsgm::EvalError& e) {
    set_error(e.what());
    return DSGM_ERR_EVAL;
  } catch (const dsgm::LengthMismatch& e) {
    set_error(e.what());
    return DSGM_ERR_LENGTH;
  } catch (const dsgm::UnsupportedError& e) {
    set_error(e.what());
    return DSGM_ERR_UNSUPPORTED;
  } catch (const dsgm::ModelDegenerateError& e) {
    set_error(e.what());
    return DSGM_ERR_DEGENERATE;
  } catch (const dsgm::PreconditionerError& e) {
    set_error(e.what());
    return DSGM_ERR_LINESEARCH;
  } catch (const dsgm::LineSearchError& e) {
    set_error(e.what());
    return DSGM_ERR_LINESEARCH;
  } catch (const dsgm::Error& e) {
    set_error(e.what());
    return DSGM_ERR_INTERNAL;
  } catch (const std::bad_alloc&) {
    set_error("out of memory");
    return DSGM_ERR_INTERNAL;
  } catch (const std::exception& e) {
    set_error(e.what());
    return DSGM_ERR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return DSGM_ERR_INTERNAL;
  }
}

dsgm_status_t invalid(const char* msg) {
  set_error(msg);
  return DSGM_ERR_INVALID_ARGUMENT;
}

dsgm::Vector to_vector(const double* data, size_t n) {
  return dsgm::Vector(data, data + n);
}

bool convert_form(dsgm_form_t in, dsgm::Form* out) {
  switch (in) {
    case DSGM_FORM_CSISZAR: *out = dsgm::Form::Csiszar; return true;
    case DSGM_FORM_CSISZAR_DUAL: *out = dsgm::Form::CsiszarDual; return true;
    case DSGM_FORM_BREGMAN: *out = dsgm::Form::Bregman; return true;
    case DSGM_FORM_BREGMAN_DUAL: *out = dsgm::Form::BregmanDual; return true;
  }
  return false;
}

bool convert_kind(dsgm_factor_kind_t in, dsgm::FactorKind* out) {
  switch (in) {
    case DSGM_KIND_REFERENCE: *out = dsgm::FactorKind::ReferenceSumRatio; return true;
    case DSGM_KIND_CSISZAR_NOMINAL: *out = dsgm::FactorKind::CsiszarTsallisNominal; return true;
    case DSGM_KIND_CSISZAR_DUAL_NOMINAL:
      *out = dsgm::FactorKind::CsiszarDualTsallisNominal;
      return true;
    case DSGM_KIND_BREGMAN_NOMINAL: *out = dsgm::FactorKind::BregmanTsallisNominal; return true;
    case DSGM_KIND_BREGMAN_DUAL_NOMINAL:
      *out = dsgm::FactorKind::BregmanDualTsallisNominal;
      return true;
  }
  return false;
}

bool convert_mode(dsgm_mode_t in, dsgm::SolverMode* out) {
  switch (in) {
    case DSGM_MODE_ADDITIVE: *out = dsgm::SolverMode::Additive; return true;
    case DSGM_MODE_PRECONDITIONED: *out = dsgm::SolverMode::Preconditioned; return true;
    case DSGM_MODE_MULTIPLICATIVE: *out = dsgm::SolverMode::Multiplicative; return true;
  }
  return false;
}

using ScalarFn = double (*)(const dsgm::EntropyFamily&, double);

dsgm_status_t family_scalar(const dsgm_family_t* family, double x, double* out, ScalarFn fn) {
  if (!family || !out) return invalid("null argument");
  return guarded([&] { *out = fn(family->family, x); });
}

}  // namespace

extern "C" {

const char* dsgm_status_name(dsgm_status_t status) {
  switch (status) {
    case DSGM_OK: return "ok";
    case DSGM_ERR_DOMAIN: return "domain_error";
    case DSGM_ERR_EVAL: return "eval_error";
    case DSGM_ERR_LENGTH: return "length_mismatch";
    case DSGM_ERR_UNSUPPORTED: return "unsupported";
    case DSGM_ERR_DEGENERATE: return "model_degenerate";
    case DSGM_ERR_LINESEARCH: return "line_search_failed";
    case DSGM_ERR_INVALID_ARGUMENT: return "invalid_argument";
    case DSGM_ERR_INTERNAL: return "internal_error";
  }
  return "unknown_status";
}

const char* dsgm_last_error(void) { return g_last_error.c_str(); }

dsgm_status_t dsgm_family_parse(const char* text, dsgm_family_t** out) {
  if (!text || !out) return invalid("null argument");
  return guarded([&] { *out = new dsgm_family{dsgm::parse_family(text)}; });
}

void dsgm_family_destroy(dsgm_family_t* family) { delete family; }

dsgm_status_t dsgm_family_to_ab(const dsgm_family_t* family, double* a, double* b,
                                int* reducible) {
  if (!family || !a || !b || !reducible) return invalid("null argument");
  return guarded([&] {
    const auto ab = dsgm::to_ab(family->family);
    *reducible = ab.has_value() ? 1 : 0;
    if (ab) {
      *a = ab->a;
      *b = ab->b;
    }
  });
}

dsgm_status_t dsgm_family_f(const dsgm_family_t* family, double x, double* out) {
  return family_scalar(family, x, out, &dsgm::f);
}

dsgm_status_t dsgm_family_f_prime(const dsgm_family_t* family, double x, double* out) {
  return family_scalar(family, x, out, &dsgm::f_prime);
}

dsgm_status_t dsgm_family_f_second(const dsgm_family_t* family, double x, double* out) {
  return family_scalar(family, x, out, &dsgm::f_second);
}

dsgm_status_t dsgm_family_f_standard(const dsgm_family_t* family, double x, double* out) {
  return family_scalar(family, x, out, &dsgm::f_standard);
}

dsgm_status_t dsgm_family_deformed_log(const dsgm_family_t* family, double x, double* out) {
  return family_scalar(family, x, out, &dsgm::deformed_log);
}

dsgm_status_t dsgm_family_diagnostics(const dsgm_family_t* family, char* buf, size_t cap,
                                      size_t* needed) {
  if (!family || !needed || (cap > 0 && !buf)) return invalid("null argument");
  return guarded([&] {
    std::string joined;
    for (const std::string& line : dsgm::diagnostics(family->family)) {
      if (!joined.empty()) joined += '\n';
      joined += line;
    }
    *needed = joined.size() + 1;
    if (cap > 0) {
      const size_t take = std::min(cap - 1, joined.size());
      std::memcpy(buf, joined.data(), take);
      buf[take] = '\0';
    }
  });
}

dsgm_status_t dsgm_spec_create(const dsgm_family_t* family, dsgm_form_t form,
                               dsgm_variant_t variant, dsgm_factor_t factor,
                               dsgm_spec_t** out) {
  if (!family || !out) return invalid("null argument");
  dsgm::DivergenceSpec spec;
  spec.family = family->family;
  if (!convert_form(form, &spec.form)) return invalid("bad form value");
  switch (variant) {
    case DSGM_VARIANT_PLAIN: spec.variant = dsgm::Variant::Plain; break;
    case DSGM_VARIANT_INVARIANT: spec.variant = dsgm::Variant::Invariant; break;
    default: return invalid("bad variant value");
  }
  switch (factor) {
    case DSGM_FACTOR_REFERENCE: spec.factor = dsgm::FactorChoice::ReferenceSumRatio; break;
    case DSGM_FACTOR_NOMINAL_TSALLIS: spec.factor = dsgm::FactorChoice::NominalTsallis; break;
    default: return invalid("bad factor value");
  }
  return guarded([&] {
    dsgm::validate(spec);
    *out = new dsgm_spec{spec};
  });
}

void dsgm_spec_destroy(dsgm_spec_t* spec) { delete spec; }

dsgm_status_t dsgm_divergence_value(const dsgm_spec_t* spec, const double* p, const double* q,
                                    size_t n, double* out) {
  if (!spec || !p || !q || !out) return invalid("null argument");
  return guarded(
      [&] { *out = dsgm::divergence_value(spec->spec, to_vector(p, n), to_vector(q, n)); });
}

dsgm_status_t dsgm_divergence_neg_grad(const dsgm_spec_t* spec, const double* p,
                                       const double* q, size_t n, double* out_grad) {
  if (!spec || !p || !q || !out_grad) return invalid("null argument");
  return guarded([&] {
    const dsgm::Vector g = dsgm::divergence_neg_grad(spec->spec, to_vector(p, n), to_vector(q, n));
    std::memcpy(out_grad, g.data(), n * sizeof(double));
  });
}

dsgm_status_t dsgm_divergence_neg_grad_split(const dsgm_spec_t* spec, const double* p,
                                             const double* q, size_t n, double* out_u,
                                             double* out_v) {
  if (!spec || !p || !q || !out_u || !out_v) return invalid("null argument");
  return guarded([&] {
    const dsgm::GradientSplit s =
        dsgm::neg_grad_split(spec->spec, to_vector(p, n), to_vector(q, n));
    std::memcpy(out_u, s.u.data(), n * sizeof(double));
    std::memcpy(out_v, s.v.data(), n * sizeof(double));
  });
}

dsgm_status_t dsgm_tabulated_neg_grad(const dsgm_spec_t* spec, const double* p, const double* q,
                                      size_t n, double* out_grad) {
  if (!spec || !p || !q || !out_grad) return invalid("null argument");
  return guarded([&] {
    const dsgm::Vector g =
        dsgm::tabulated_neg_grad(spec->spec, to_vector(p, n), to_vector(q, n));
    std::memcpy(out_grad, g.data(), n * sizeof(double));
  });
}

dsgm_status_t dsgm_invariance_factor(dsgm_factor_kind_t kind, const dsgm_family_t* family,
                                     const double* p, const double* q, size_t n, double* out) {
  if (!family || !p || !q || !out) return invalid("null argument");
  dsgm::FactorKind k;
  if (!convert_kind(kind, &k)) return invalid("bad factor kind value");
  return guarded(
      [&] { *out = dsgm::invariance_factor(k, family->family, to_vector(p, n), to_vector(q, n)); });
}

dsgm_status_t dsgm_stationarity_residual(dsgm_factor_kind_t kind, const dsgm_family_t* family,
                                         const double* p, const double* q, size_t n,
                                         double* out) {
  if (!family || !p || !q || !out) return invalid("null argument");
  dsgm::FactorKind k;
  if (!convert_kind(kind, &k)) return invalid("bad factor kind value");
  return guarded([&] {
    *out = dsgm::nominal_stationarity_residual(k, family->family, to_vector(p, n),
                                               to_vector(q, n));
  });
}

dsgm_status_t dsgm_operator_create_dense(size_t rows, size_t cols, const double* entries,
                                         dsgm_operator_t** out) {
  if (!entries || !out) return invalid("null argument");
  return guarded([&] {
    auto op = std::make_shared<dsgm::DenseOperator>(rows, cols, to_vector(entries, rows * cols));
    *out = new dsgm_operator{std::move(op)};
  });
}

dsgm_status_t dsgm_operator_create_conv1d(const double* kernel, size_t kernel_len, size_t n,
                                          dsgm_boundary_t boundary, dsgm_operator_t** out) {
  if (!kernel || !out) return invalid("null argument");
  dsgm::Boundary b;
  switch (boundary) {
    case DSGM_BOUNDARY_ZERO_PAD: b = dsgm::Boundary::ZeroPad; break;
    case DSGM_BOUNDARY_PERIODIC: b = dsgm::Boundary::Periodic; break;
    default: return invalid("bad boundary value");
  }
  return guarded([&] {
    auto op = std::make_shared<dsgm::Convolution1D>(to_vector(kernel, kernel_len), n, b);
    *out = new dsgm_operator{std::move(op)};
  });
}

size_t dsgm_operator_rows(const dsgm_operator_t* op) { return op ? op->op->rows() : 0; }

size_t dsgm_operator_cols(const dsgm_operator_t* op) { return op ? op->op->cols() : 0; }

dsgm_status_t dsgm_operator_forward(const dsgm_operator_t* op, const double* x, size_t n,
                                    double* out_q) {
  if (!op || !x || !out_q) return invalid("null argument");
  return guarded([&] {
    const dsgm::Vector q = op->op->forward(to_vector(x, n));
    std::memcpy(out_q, q.data(), q.size() * sizeof(double));
  });
}

dsgm_status_t dsgm_operator_adjoint(const dsgm_operator_t* op, const double* g, size_t m,
                                    double* out) {
  if (!op || !g || !out) return invalid("null argument");
  return guarded([&] {
    const dsgm::Vector a = op->op->adjoint(to_vector(g, m));
    std::memcpy(out, a.data(), a.size() * sizeof(double));
  });
}

void dsgm_operator_destroy(dsgm_operator_t* op) { delete op; }

dsgm_status_t dsgm_neg_grad_x(const dsgm_spec_t* spec, const dsgm_operator_t* op,
                              const double* p, size_t m, const double* x, size_t n,
                              double* out) {
  if (!spec || !op || !p || !x || !out) return invalid("null argument");
  return guarded([&] {
    dsgm::InverseProblem problem{op->op, to_vector(p, m), std::nullopt};
    const dsgm::Vector g = dsgm::neg_grad_x(spec->spec, problem, to_vector(x, n));
    std::memcpy(out, g.data(), g.size() * sizeof(double));
  });
}

void dsgm_solver_options_default(dsgm_solver_options_t* opts) {
  if (!opts) return;
  opts->mode = DSGM_MODE_MULTIPLICATIVE;
  opts->max_iters = 10000;
  opts->grad_tol = 1e-8;
  opts->value_tol = 1e-12;
  opts->armijo_c = 1e-4;
  opts->backtrack_ratio = 0.5;
  opts->step_safety = 0.99;
  opts->has_sum_constraint = 0;
  opts->sum_constraint = 0.0;
}

dsgm_status_t dsgm_solve(const dsgm_spec_t* spec, const dsgm_operator_t* op, const double* p,
                         size_t m, const double* x0, size_t n,
                         const dsgm_solver_options_t* opts, dsgm_result_t** out) {
  if (!spec || !op || !p || !x0 || !opts || !out) return invalid("null argument");
  dsgm::SolverConfig config;
  if (!convert_mode(opts->mode, &config.mode)) return invalid("bad mode value");
  config.spec = spec->spec;
  config.max_iters = opts->max_iters;
  config.grad_tol = opts->grad_tol;
  config.value_tol = opts->value_tol;
  config.armijo_c = opts->armijo_c;
  config.backtrack_ratio = opts->backtrack_ratio;
  config.step_safety = opts->step_safety;
  if (opts->has_sum_constraint) config.sum_constraint = opts->sum_constraint;
  return guarded([&] {
    dsgm::InverseProblem problem{op->op, to_vector(p, m), std::nullopt};
    dsgm::SolveResult result = dsgm::solve(config, problem, to_vector(x0, n));
    *out = new dsgm_result{std::move(result)};
  });
}

dsgm_status_t dsgm_result_x(const dsgm_result_t* result, double* out, size_t n) {
  if (!result || !out) return invalid("null argument");
  if (n != result->result.x.size()) {
    set_error("buffer length does not match solution length");
    return DSGM_ERR_LENGTH;
  }
  std::memcpy(out, result->result.x.data(), n * sizeof(double));
  return DSGM_OK;
}

size_t dsgm_result_trace_size(const dsgm_result_t* result) {
  return result ? result->result.trace.size() : 0;
}

dsgm_status_t dsgm_result_trace(const dsgm_result_t* result, size_t index,
                                dsgm_trace_row_t* out) {
  if (!result || !out) return invalid("null argument");
  if (index >= result->result.trace.size()) return invalid("trace index out of range");
  const dsgm::TraceRecord& r = result->result.trace[index];
  out->iter = r.iter;
  out->value = r.value;
  out->grad_norm = r.grad_norm;
  out->alpha = r.alpha;
  out->sum_x = r.sum_x;
  out->min_x = r.min_x;
  return DSGM_OK;
}

dsgm_stop_t dsgm_result_status(const dsgm_result_t* result) {
  if (!result) return DSGM_STOP_MAX_ITERS;
  switch (result->result.status) {
    case dsgm::SolveStatus::GradTol: return DSGM_STOP_GRAD_TOL;
    case dsgm::SolveStatus::ValueTol: return DSGM_STOP_VALUE_TOL;
    case dsgm::SolveStatus::MaxIters: return DSGM_STOP_MAX_ITERS;
    case dsgm::SolveStatus::Degenerate: return DSGM_STOP_DEGENERATE;
  }
  return DSGM_STOP_MAX_ITERS;
}

void dsgm_result_destroy(dsgm_result_t* result) { delete result; }

dsgm_status_t dsgm_synth_problem(size_t n, uint64_t seed, size_t kernel_width, int poisson,
                                 double noise_scale, double* out_x_true, double* out_kernel,
                                 double* out_p, double* out_x0) {
  if (!out_x_true || !out_kernel || !out_p || !out_x0) return invalid("null argument");
  return guarded([&] {
    const dsgm::SynthProblem sp =
        dsgm::make_synth_problem(n, seed, kernel_width, poisson != 0, noise_scale);
    std::memcpy(out_x_true, sp.x_true.data(), n * sizeof(double));
    std::memcpy(out_kernel, sp.kernel.data(), kernel_width * sizeof(double));
    std::memcpy(out_p, sp.problem.measurement.data(), n * sizeof(double));
    std::memcpy(out_x0, sp.x0.data(), n * sizeof(double));
  });
}

}  // extern "C"
