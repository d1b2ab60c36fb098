#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "core/divergence.hpp"
#include "core/linear_model.hpp"
#include "core/vec.hpp"

namespace dsgm {

enum class SolverMode : std::uint8_t {
  Additive,
  Preconditioned,
  Multiplicative,
};

// Iterative schemes for min_x D(p, Hx) over x >= 0, optionally with sum(x)
// fixed.  All three modes consume the same split gradient: the divergence
// gradient in measurement space is written as U - V with U, V >= 0, both are
// pulled back through the adjoint, and the mode decides how the pair drives
// the update.
struct SolverConfig {
  SolverMode mode = SolverMode::Multiplicative;
  DivergenceSpec spec;
  std::size_t max_iters = 10000;
  double grad_tol = 1e-8;
  double value_tol = 1e-12;
  double armijo_c = 1e-4;
  double backtrack_ratio = 0.5;
  // Fraction of the distance to the non-negativity boundary used as the
  // initial trial step.  Keeping it below 1 guarantees strictly positive
  // iterates.
  double step_safety = 0.99;
  std::optional<double> sum_constraint;
};

void validate(const SolverConfig& config);

struct TraceRecord {
  std::size_t iter = 0;
  double value = 0.0;
  double grad_norm = 0.0;
  double alpha = 0.0;
  double sum_x = 0.0;
  double min_x = 0.0;
};

enum class SolveStatus : std::uint8_t {
  GradTol,
  ValueTol,
  MaxIters,
  Degenerate,
};

struct SolveResult {
  Vector x;
  std::vector<TraceRecord> trace;
  SolveStatus status = SolveStatus::MaxIters;
};

// Largest step along d that keeps x + alpha*d >= 0; +inf when no component
// of d is negative.
double max_step(const Vector& x, const Vector& d);

// Single updates, exposed for testing and for callers that manage their own
// outer loop.  Each returns the next iterate.
Vector iterate_additive(const SolverConfig& config, const InverseProblem& problem,
                        const Vector& x);
Vector iterate_preconditioned(const SolverConfig& config, const InverseProblem& problem,
                              const Vector& x);
Vector iterate_multiplicative(const SolverConfig& config, const InverseProblem& problem,
                              const Vector& x);

SolveResult solve(const SolverConfig& config, const InverseProblem& problem, const Vector& x0);

}  // namespace dsgm
