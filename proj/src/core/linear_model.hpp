#pragma once

#include <cstddef>
#include <memory>
#include <optional>

#include "core/divergence.hpp"
#include "core/vec.hpp"

namespace dsgm {

// Forward model q = Hx with non-negative entries, so x >= 0 implies Hx >= 0.
class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual std::size_t rows() const = 0;
  virtual std::size_t cols() const = 0;
  virtual Vector forward(const Vector& x) const = 0;
  virtual Vector adjoint(const Vector& g) const = 0;
};

class DenseOperator final : public LinearOperator {
 public:
  // entries row-major, length rows*cols, finite and non-negative
  DenseOperator(std::size_t rows, std::size_t cols, Vector entries);

  std::size_t rows() const override { return rows_; }
  std::size_t cols() const override { return cols_; }
  Vector forward(const Vector& x) const override;
  Vector adjoint(const Vector& g) const override;

 private:
  std::size_t rows_, cols_;
  Vector entries_;
};

enum class Boundary { ZeroPad, Periodic };

// Same-size 1-D convolution by a non-negative kernel centered at
// (len - 1)/2; periodic wrap keeps column sums equal to the kernel sum.
class Convolution1D final : public LinearOperator {
 public:
  Convolution1D(Vector kernel, std::size_t n, Boundary boundary);

  std::size_t rows() const override { return n_; }
  std::size_t cols() const override { return n_; }
  Vector forward(const Vector& x) const override;
  Vector adjoint(const Vector& g) const override;

  const Vector& kernel() const { return kernel_; }
  Boundary boundary() const { return boundary_; }

 private:
  Vector kernel_;
  std::size_t n_;
  Boundary boundary_;
};

struct InverseProblem {
  std::shared_ptr<const LinearOperator> op;
  Vector measurement;
  std::optional<double> sum_constraint;
};

void validate(const InverseProblem& problem);

// H^T applied to the negative divergence gradient at q = Hx.  A zero
// component of q is reported as ModelDegenerateError rather than floored,
// since flooring would silently change the objective.
Vector neg_grad_x(const DivergenceSpec& spec, const InverseProblem& problem, const Vector& x);

}  // namespace dsgm
