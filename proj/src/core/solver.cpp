#include "core/solver.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "core/error.hpp"

namespace dsgm {

namespace {

void check_unit_interval(double v, const char* name) {
  if (!(std::isfinite(v) && v > 0.0 && v < 1.0))
    throw DomainError(std::string(name) + " must lie strictly between 0 and 1");
}

struct StepState {
  Vector q;
  Vector ux;
  Vector vx;
  Vector g;
  double value = 0.0;
  double grad_norm = 0.0;
};

StepState compute_state(const DivergenceSpec& spec, const InverseProblem& problem,
                        const Vector& x) {
  StepState st;
  st.q = problem.op->forward(x);
  for (double v : st.q)
    if (v <= 0.0) throw ModelDegenerateError("forward model produced a non-positive component");
  st.value = divergence_value(spec, problem.measurement, st.q);
  const GradientSplit split = neg_grad_split(spec, problem.measurement, st.q);
  st.ux = problem.op->adjoint(split.u);
  st.vx = problem.op->adjoint(split.v);
  st.g.resize(x.size());
  for (std::size_t j = 0; j < x.size(); ++j) st.g[j] = st.ux[j] - st.vx[j];
  st.grad_norm = inf_norm(st.g);
  return st;
}

// Backtracking line search: start from the largest safe step and shrink until
// the sufficient-decrease test holds.  Trial points where the objective is
// undefined count as rejections, and the comparison is strict so that a step
// too small to move x (where the decrease bound rounds to f0) cannot be
// accepted as a spurious no-op.
template <typename Objective>
double armijo_step(const SolverConfig& config, const Objective& objective, const Vector& x,
                   const Vector& d, double slope, double alpha_max, double f0) {
  if (!(slope < 0.0)) throw LineSearchError("search direction is not a descent direction");
  double alpha = std::isinf(alpha_max) ? 1.0 : config.step_safety * alpha_max;
  Vector xt(x.size());
  for (int back = 0; back <= 60; ++back) {
    for (std::size_t j = 0; j < x.size(); ++j) xt[j] = x[j] + alpha * d[j];
    bool usable = true;
    double ft = 0.0;
    try {
      ft = objective(xt);
    } catch (const Error&) {
      usable = false;
    }
    if (usable && std::isfinite(ft) && ft < f0 + config.armijo_c * alpha * slope) return alpha;
    alpha *= config.backtrack_ratio;
  }
  throw LineSearchError("no acceptable step after 60 backtracks");
}

void check_preconditioner(const Vector& vx) {
  for (double v : vx)
    if (!(v >= 1e-300))
      throw PreconditionerError("split denominator is not positive; the scheme cannot proceed");
}

std::optional<double> effective_constraint(const SolverConfig& config,
                                           const InverseProblem& problem) {
  const std::optional<double> c =
      config.sum_constraint ? config.sum_constraint : problem.sum_constraint;
  if (c && config.mode == SolverMode::Multiplicative &&
      config.spec.variant != Variant::Invariant)
    throw DomainError("multiplicative renormalisation needs a scale-invariant divergence");
  return c;
}

Vector take_step(const SolverConfig& config, const InverseProblem& problem, const StepState& st,
                 const Vector& x, const std::optional<double>& constraint, double* alpha_out) {
  const std::size_t n = x.size();
  auto objective = [&](const Vector& xt) {
    const Vector qt = problem.op->forward(xt);
    for (double v : qt)
      if (v <= 0.0) throw ModelDegenerateError("trial point leaves the model domain");
    return divergence_value(config.spec, problem.measurement, qt);
  };

  if (config.mode == SolverMode::Multiplicative) {
    check_preconditioner(st.vx);
    Vector xn(n);
    for (std::size_t j = 0; j < n; ++j) xn[j] = x[j] * (st.ux[j] / st.vx[j]);
    if (constraint) {
      const double s = vsum(xn);
      if (!(s > 0.0)) throw ModelDegenerateError("multiplicative update collapsed to zero");
      const double scale = *constraint / s;
      for (double& v : xn) v *= scale;
    }
    *alpha_out = 1.0;
    return xn;
  }

  Vector d(n);
  if (config.mode == SolverMode::Additive) {
    for (std::size_t j = 0; j < n; ++j) d[j] = x[j] * st.g[j];
  } else {
    check_preconditioner(st.vx);
    for (std::size_t j = 0; j < n; ++j) d[j] = x[j] * (st.ux[j] / st.vx[j] - 1.0);
  }
  const double slope = -vdot(st.g, d);
  const double alpha = armijo_step(config, objective, x, d, slope, max_step(x, d), st.value);
  Vector xn(n);
  for (std::size_t j = 0; j < n; ++j) xn[j] = x[j] + alpha * d[j];
  *alpha_out = alpha;
  return xn;
}

void check_iterate_inputs(const SolverConfig& config, const InverseProblem& problem,
                          const Vector& x) {
  validate(config);
  validate(problem);
  check_positive(x, "x");
  if (x.size() != problem.op->cols()) throw LengthMismatch("x length does not match operator columns");
}

}  // namespace

void validate(const SolverConfig& config) {
  validate(config.spec);
  if (!(std::isfinite(config.grad_tol) && config.grad_tol > 0.0))
    throw DomainError("grad_tol must be positive");
  if (!(std::isfinite(config.value_tol) && config.value_tol > 0.0))
    throw DomainError("value_tol must be positive");
  check_unit_interval(config.armijo_c, "armijo_c");
  check_unit_interval(config.backtrack_ratio, "backtrack_ratio");
  check_unit_interval(config.step_safety, "step_safety");
  if (config.sum_constraint &&
      !(std::isfinite(*config.sum_constraint) && *config.sum_constraint > 0.0))
    throw DomainError("sum constraint must be a positive finite value");
  if (config.sum_constraint && config.mode == SolverMode::Multiplicative &&
      config.spec.variant != Variant::Invariant)
    throw DomainError("multiplicative renormalisation needs a scale-invariant divergence");
}

double max_step(const Vector& x, const Vector& d) {
  check_same_length(x, d, "x", "d");
  double amax = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < x.size(); ++j)
    if (d[j] < 0.0) amax = std::min(amax, -x[j] / d[j]);
  return amax;
}

Vector iterate_additive(const SolverConfig& config, const InverseProblem& problem,
                        const Vector& x) {
  SolverConfig c = config;
  c.mode = SolverMode::Additive;
  check_iterate_inputs(c, problem, x);
  const std::optional<double> constraint = effective_constraint(c, problem);
  const StepState st = compute_state(c.spec, problem, x);
  double alpha = 0.0;
  return take_step(c, problem, st, x, constraint, &alpha);
}

Vector iterate_preconditioned(const SolverConfig& config, const InverseProblem& problem,
                              const Vector& x) {
  SolverConfig c = config;
  c.mode = SolverMode::Preconditioned;
  check_iterate_inputs(c, problem, x);
  const std::optional<double> constraint = effective_constraint(c, problem);
  const StepState st = compute_state(c.spec, problem, x);
  double alpha = 0.0;
  return take_step(c, problem, st, x, constraint, &alpha);
}

Vector iterate_multiplicative(const SolverConfig& config, const InverseProblem& problem,
                              const Vector& x) {
  SolverConfig c = config;
  c.mode = SolverMode::Multiplicative;
  check_iterate_inputs(c, problem, x);
  const std::optional<double> constraint = effective_constraint(c, problem);
  const StepState st = compute_state(c.spec, problem, x);
  double alpha = 0.0;
  return take_step(c, problem, st, x, constraint, &alpha);
}

SolveResult solve(const SolverConfig& config, const InverseProblem& problem, const Vector& x0) {
  check_iterate_inputs(config, problem, x0);
  const std::optional<double> constraint = effective_constraint(config, problem);
  if (constraint) {
    const double s = vsum(x0);
    if (std::fabs(s - *constraint) > 1e-9 * *constraint)
      throw DomainError("x0 does not satisfy the sum constraint");
  }

  SolveResult res;
  Vector x = x0;
  double prev_value = 0.0;
  for (std::size_t k = 0;; ++k) {
    const StepState st = compute_state(config.spec, problem, x);
    res.trace.push_back({k, st.value, st.grad_norm, 0.0, vsum(x), vmin(x)});
    if (st.grad_norm <= config.grad_tol) {
      res.status = SolveStatus::GradTol;
      break;
    }
    if (k > 0) {
      const double rel = (prev_value - st.value) / std::max(std::fabs(prev_value), 1e-300);
      if (rel >= 0.0 && rel <= config.value_tol) {
        res.status = SolveStatus::ValueTol;
        break;
      }
    }
    // The plain multiplicative map has no line search, so a sustained rise in
    // the objective means the scheme is not contracting for this divergence.
    if (config.mode == SolverMode::Multiplicative && k >= 10) {
      const double ref = res.trace[k - 10].value;
      if (st.value > ref * (1.0 + 1e-10) + 1e-14) {
        res.status = SolveStatus::Degenerate;
        break;
      }
    }
    if (k >= config.max_iters) {
      res.status = SolveStatus::MaxIters;
      break;
    }
    prev_value = st.value;
    double alpha = 0.0;
    x = take_step(config, problem, st, x, constraint, &alpha);
    res.trace.back().alpha = alpha;
  }
  res.x = std::move(x);
  return res;
}

}  // namespace dsgm
