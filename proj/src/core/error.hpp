#pragma once

#include <stdexcept>
#include <string>

namespace dsgm {

// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A parameter lies outside its documented domain.
class DomainError : public Error {
  using Error::Error;
};

// An expression is singular or undefined at the given input.
class EvalError : public Error {
  using Error::Error;
};

// Two vectors that must have equal length do not.
class LengthMismatch : public Error {
  using Error::Error;
};

// The requested combination is deliberately not provided.
class UnsupportedError : public Error {
  using Error::Error;
};

// The linear model produced a non-positive component where the divergence
// needs strict positivity.
class ModelDegenerateError : public Error {
  using Error::Error;
};

// A preconditioner denominator collapsed to zero (or below 1e-300).
class PreconditionerError : public Error {
  using Error::Error;
};

// Backtracking line search failed to find an acceptable step.
class LineSearchError : public Error {
  using Error::Error;
};

}  // namespace dsgm
