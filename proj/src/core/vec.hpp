#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "core/error.hpp"

namespace dsgm {

using Vector = std::vector<double>;

inline double vsum(const Vector& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc;
}

inline double vdot(const Vector& a, const Vector& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

inline double inf_norm(const Vector& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

inline double two_norm(const Vector& v) { return std::sqrt(vdot(v, v)); }

inline double vmin(const Vector& v) {
  double m = v.empty() ? 0.0 : v[0];
  for (double x : v) m = std::min(m, x);
  return m;
}

inline Vector scaled(const Vector& v, double s) {
  Vector out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
  return out;
}

// Power with the conventions used throughout: 0^0 = 1, 0^e = 0 for e > 0, and a
// negative exponent at zero is an evaluation error.
inline double pow_nn(double x, double e) {
  if (x == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    throw EvalError("zero component raised to a negative exponent");
  }
  return std::pow(x, e);
}

inline double checked_log(double x) {
  if (!(x > 0.0)) throw EvalError("logarithm of a non-positive value");
  return std::log(x);
}

inline void check_nonempty(const Vector& v, const char* name) {
  if (v.empty()) throw LengthMismatch(std::string(name) + " must have length >= 1");
}

inline void check_same_length(const Vector& a, const Vector& b, const char* aname,
                              const char* bname) {
  if (a.size() != b.size())
    throw LengthMismatch(std::string(aname) + " and " + bname + " differ in length (" +
                         std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

inline void check_finite_nonneg(const Vector& v, const char* name) {
  check_nonempty(v, name);
  for (double x : v)
    if (!(std::isfinite(x) && x >= 0.0))
      throw EvalError(std::string(name) + " must be finite and non-negative componentwise");
}

inline void check_positive(const Vector& v, const char* name) {
  check_nonempty(v, name);
  for (double x : v)
    if (!(std::isfinite(x) && x > 0.0))
      throw EvalError(std::string(name) + " must be finite and strictly positive componentwise");
}

}  // namespace dsgm
