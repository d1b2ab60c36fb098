#include "core/linear_model.hpp"

#include <cmath>
#include <string>

#include "core/error.hpp"

namespace dsgm {

namespace {

void check_entries(const Vector& v, const char* name) {
  for (double x : v)
    if (!(std::isfinite(x) && x >= 0.0))
      throw DomainError(std::string(name) + " must be finite and non-negative");
}

std::size_t wrap(std::ptrdiff_t idx, std::size_t n) {
  const std::ptrdiff_t m = static_cast<std::ptrdiff_t>(n);
  return static_cast<std::size_t>(((idx % m) + m) % m);
}

}  // namespace

DenseOperator::DenseOperator(std::size_t rows, std::size_t cols, Vector entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
  if (rows_ == 0 || cols_ == 0) throw DomainError("operator dimensions must be >= 1");
  if (entries_.size() != rows_ * cols_)
    throw LengthMismatch("dense operator needs rows*cols entries, got " +
                         std::to_string(entries_.size()));
  check_entries(entries_, "operator entries");
}

Vector DenseOperator::forward(const Vector& x) const {
  if (x.size() != cols_) throw LengthMismatch("x length does not match operator columns");
  Vector q(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = entries_.data() + i * cols_;
    double acc = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * x[j];
    q[i] = acc;
  }
  return q;
}

Vector DenseOperator::adjoint(const Vector& g) const {
  if (g.size() != rows_) throw LengthMismatch("g length does not match operator rows");
  Vector out(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* row = entries_.data() + i * cols_;
    for (std::size_t j = 0; j < cols_; ++j) out[j] += row[j] * g[i];
  }
  return out;
}

Convolution1D::Convolution1D(Vector kernel, std::size_t n, Boundary boundary)
    : kernel_(std::move(kernel)), n_(n), boundary_(boundary) {
  if (n_ == 0) throw DomainError("signal length must be >= 1");
  if (kernel_.empty()) throw DomainError("kernel must have length >= 1");
  check_entries(kernel_, "kernel");
}

Vector Convolution1D::forward(const Vector& x) const {
  if (x.size() != n_) throw LengthMismatch("x length does not match operator columns");
  const std::ptrdiff_t c = static_cast<std::ptrdiff_t>((kernel_.size() - 1) / 2);
  Vector q(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kernel_.size(); ++k) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(i) +
                                 static_cast<std::ptrdiff_t>(k) - c;
      if (boundary_ == Boundary::Periodic) {
        acc += kernel_[k] * x[wrap(src, n_)];
      } else if (src >= 0 && src < static_cast<std::ptrdiff_t>(n_)) {
        acc += kernel_[k] * x[static_cast<std::size_t>(src)];
      }
    }
    q[i] = acc;
  }
  return q;
}

Vector Convolution1D::adjoint(const Vector& g) const {
  if (g.size() != n_) throw LengthMismatch("g length does not match operator rows");
  const std::ptrdiff_t c = static_cast<std::ptrdiff_t>((kernel_.size() - 1) / 2);
  Vector out(n_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kernel_.size(); ++k) {
      const std::ptrdiff_t src = static_cast<std::ptrdiff_t>(j) -
                                 static_cast<std::ptrdiff_t>(k) + c;
      if (boundary_ == Boundary::Periodic) {
        acc += kernel_[k] * g[wrap(src, n_)];
      } else if (src >= 0 && src < static_cast<std::ptrdiff_t>(n_)) {
        acc += kernel_[k] * g[static_cast<std::size_t>(src)];
      }
    }
    out[j] = acc;
  }
  return out;
}

void validate(const InverseProblem& problem) {
  if (!problem.op) throw DomainError("inverse problem has no operator");
  check_finite_nonneg(problem.measurement, "measurement");
  if (problem.measurement.size() != problem.op->rows())
    throw LengthMismatch("measurement length does not match operator rows");
  if (problem.sum_constraint && !(*problem.sum_constraint > 0.0 &&
                                  std::isfinite(*problem.sum_constraint)))
    throw DomainError("sum constraint must be a positive finite value");
}

Vector neg_grad_x(const DivergenceSpec& spec, const InverseProblem& problem, const Vector& x) {
  validate(problem);
  check_finite_nonneg(x, "x");
  const Vector q = problem.op->forward(x);
  for (double v : q)
    if (v <= 0.0) throw ModelDegenerateError("forward model produced a non-positive component");
  return problem.op->adjoint(divergence_neg_grad(spec, problem.measurement, q));
}

}  // namespace dsgm
