#include "core/divergence.hpp"

#include <cmath>

#include "core/error.hpp"
#include "core/invariance.hpp"

namespace dsgm {

namespace {

void check_pair(const Vector& p, const Vector& q) {
  check_finite_nonneg(p, "p");
  check_finite_nonneg(q, "q");
  check_same_length(p, q, "p", "q");
}

// Fallback split for gradients without a sign-stable two-term decomposition
// (Shannon and Newton dual forms, Alpha dual form): shift both parts up by 1
// so they stay strictly positive.
GradientSplit max_split(const Vector& g) {
  GradientSplit s{Vector(g.size()), Vector(g.size())};
  for (std::size_t i = 0; i < g.size(); ++i) {
    s.u[i] = std::max(g[i], 0.0) + 1.0;
    s.v[i] = std::max(-g[i], 0.0) + 1.0;
  }
  return s;
}

}  // namespace

void validate(const DivergenceSpec& spec) {
  validate(spec.family);
  const bool dual_kernel = spec.family.tag == FamilyTag::Alpha;
  if (dual_kernel && (spec.form == Form::Bregman || spec.form == Form::BregmanDual))
    throw UnsupportedError("Bregman constructions are not provided for the alpha family");
  if (spec.variant == Variant::Invariant &&
      (spec.family.tag == FamilyTag::Newton || spec.family.tag == FamilyTag::Alpha))
    throw UnsupportedError("invariant divergences are only provided for families with an "
                           "exponent-pair reduction");
  if (spec.factor == FactorChoice::NominalTsallis && spec.family.tag != FamilyTag::Tsallis)
    throw UnsupportedError("the nominal factor is only defined for the tsallis family");
}

// --- plain values -------------------------------------------------------------

double csiszar_value(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  check_pair(p, q);
  check_positive(q, "q");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += q[i] * f_standard(fam, p[i] / q[i]);
  return acc;
}

double csiszar_dual_value(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  return csiszar_value(fam, q, p);
}

double bregman_value(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  check_pair(p, q);
  if (fam.tag == FamilyTag::Alpha)
    throw UnsupportedError("Bregman constructions are not provided for the alpha family");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    acc += f(fam, p[i]) - f(fam, q[i]) - (p[i] - q[i]) * f_prime(fam, q[i]);
  return acc;
}

double bregman_dual_value(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  return bregman_value(fam, q, p);
}

// --- plain negative gradients ---------------------------------------------------
//
// With r = p/q and f_c the standard kernel:
//   Csiszar      -d/dq [q f_c(p/q)]        = r f'(r) - f(r) - 1
//   CsiszarDual  -d/dq [p f_c(q/p)]        = 1 - f'(q/p)
//   Bregman      -d/dq B(p||q)             = (p - q) f''(q)
//   BregmanDual  -d/dq B(q||p)             = f'(p) - f'(q)

Vector csiszar_neg_grad(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  check_pair(p, q);
  check_positive(q, "q");
  Vector g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double r = p[i] / q[i];
    // r = 0: the r f'(r) term vanishes in the limit, leaving -f(0) - 1.
    g[i] = (r == 0.0 ? -f(fam, 0.0) : r * f_prime(fam, r) - f(fam, r)) - 1.0;
  }
  return g;
}

Vector csiszar_dual_neg_grad(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  check_pair(p, q);
  check_positive(p, "p");
  check_positive(q, "q");
  Vector g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = 1.0 - f_prime(fam, q[i] / p[i]);
  return g;
}

Vector bregman_neg_grad(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  check_pair(p, q);
  if (fam.tag == FamilyTag::Alpha)
    throw UnsupportedError("Bregman constructions are not provided for the alpha family");
  Vector g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = (p[i] - q[i]) * f_second(fam, q[i]);
  return g;
}

Vector bregman_dual_neg_grad(const EntropyFamily& fam, const Vector& p, const Vector& q) {
  check_pair(p, q);
  if (fam.tag == FamilyTag::Alpha)
    throw UnsupportedError("Bregman constructions are not provided for the alpha family");
  Vector g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) g[i] = f_prime(fam, p[i]) - f_prime(fam, q[i]);
  return g;
}

// --- splits ---------------------------------------------------------------------

namespace {

GradientSplit plain_split(const DivergenceSpec& spec, const Vector& p, const Vector& q) {
  const EntropyFamily& fam = spec.family;
  const std::size_t n = p.size();
  GradientSplit s{Vector(n), Vector(n)};

  switch (spec.form) {
    case Form::Csiszar: {
      // u = r f'(r) - f(r) >= 0 (it vanishes at r = 0 and grows with r), v = 1.
      check_positive(q, "q");
      for (std::size_t i = 0; i < n; ++i) {
        const double r = p[i] / q[i];
        s.u[i] = r == 0.0 ? -f(fam, 0.0) : r * f_prime(fam, r) - f(fam, r);
        s.v[i] = 1.0;
      }
      return s;
    }
    case Form::CsiszarDual: {
      const auto ab = to_ab(fam);
      if (!ab || fam.tag == FamilyTag::Shannon || std::fabs(ab->gap()) <= kLimitGap)
        return max_split(csiszar_dual_neg_grad(fam, p, q));
      // -grad = 1 + (b r^{1-b} - a r^{1-a})/(a - b) with r = p/q; each power
      // term joins u or v according to the sign of its coefficient.
      check_positive(p, "p");
      check_positive(q, "q");
      const double a = ab->a, b = ab->b;
      const double ca = -a / ab->gap(), cb = b / ab->gap();
      for (std::size_t i = 0; i < n; ++i) {
        const double r = p[i] / q[i];
        const double ta = pow_nn(r, 1.0 - a), tb = pow_nn(r, 1.0 - b);
        double u = 1.0, v = 0.0;
        (ca >= 0.0 ? u : v) += std::fabs(ca) * ta;
        (cb >= 0.0 ? u : v) += std::fabs(cb) * tb;
        s.u[i] = u;
        s.v[i] = v;
      }
      return s;
    }
    case Form::Bregman: {
      // -grad = (p/q - 1) * z with z = q f''(q); z < 0 only where the kernel
      // loses convexity (extreme kls corner), in which case the two parts
      // swap roles.
      check_positive(q, "q");
      for (std::size_t i = 0; i < n; ++i) {
        const double z = q[i] * f_second(fam, q[i]);
        if (z >= 0.0) {
          s.u[i] = (p[i] / q[i]) * z;
          s.v[i] = z;
        } else {
          s.u[i] = -z;
          s.v[i] = (p[i] / q[i]) * -z;
        }
      }
      return s;
    }
    case Form::BregmanDual: {
      const auto ab = to_ab(fam);
      if (!ab || fam.tag == FamilyTag::Shannon || std::fabs(ab->gap()) <= kLimitGap)
        return max_split(bregman_dual_neg_grad(fam, p, q));
      // -grad = [a(p^{a-1} - q^{a-1}) - b(p^{b-1} - q^{b-1})]/(a - b); a
      // positive-coefficient group sends its p-power to u and its q-power to
      // v, a negative-coefficient group routes the other way round.
      const double a = ab->a, b = ab->b;
      const double ca = a / ab->gap(), cb = -b / ab->gap();
      for (std::size_t i = 0; i < n; ++i) {
        const double pa = pow_nn(p[i], a - 1.0), qa = pow_nn(q[i], a - 1.0);
        const double pb = pow_nn(p[i], b - 1.0), qb = pow_nn(q[i], b - 1.0);
        double u = 0.0, v = 0.0;
        (ca >= 0.0 ? u : v) += std::fabs(ca) * pa;
        (ca >= 0.0 ? v : u) += std::fabs(ca) * qa;
        (cb >= 0.0 ? u : v) += std::fabs(cb) * pb;
        (cb >= 0.0 ? v : u) += std::fabs(cb) * qb;
        s.u[i] = u;
        s.v[i] = v;
      }
      return s;
    }
  }
  throw EvalError("unknown divergence form");
}

}  // namespace

// --- unified dispatch -------------------------------------------------------------

double divergence_value(const DivergenceSpec& spec, const Vector& p, const Vector& q) {
  validate(spec);
  if (spec.variant == Variant::Invariant) return invariant_value(spec, p, q);
  switch (spec.form) {
    case Form::Csiszar: return csiszar_value(spec.family, p, q);
    case Form::CsiszarDual: return csiszar_dual_value(spec.family, p, q);
    case Form::Bregman: return bregman_value(spec.family, p, q);
    case Form::BregmanDual: return bregman_dual_value(spec.family, p, q);
  }
  throw EvalError("unknown divergence form");
}

Vector divergence_neg_grad(const DivergenceSpec& spec, const Vector& p, const Vector& q) {
  validate(spec);
  if (spec.variant == Variant::Invariant) return invariant_neg_grad(spec, p, q);
  switch (spec.form) {
    case Form::Csiszar: return csiszar_neg_grad(spec.family, p, q);
    case Form::CsiszarDual: return csiszar_dual_neg_grad(spec.family, p, q);
    case Form::Bregman: return bregman_neg_grad(spec.family, p, q);
    case Form::BregmanDual: return bregman_dual_neg_grad(spec.family, p, q);
  }
  throw EvalError("unknown divergence form");
}

GradientSplit neg_grad_split(const DivergenceSpec& spec, const Vector& p, const Vector& q) {
  validate(spec);
  check_pair(p, q);
  if (spec.variant == Variant::Invariant) return invariant_neg_grad_split(spec, p, q);
  return plain_split(spec, p, q);
}

// --- tabulated per-family gradients ------------------------------------------------
//
// Each family row is written directly in its own parameters:
//   Csiszar      -grad = (p/q) X - 1
//   CsiszarDual  -grad = (p/q) T + 1
//   Bregman      -grad = (p/q - 1) Z
//   BregmanDual  -grad = difference expression in p and q

namespace {

struct TableParams {
  FamilyTag tag;
  double t = 0, k = 0, z = 0, g = 0, r = 0, a = 0, b = 0;
};

TableParams table_params(const EntropyFamily& fam) {
  TableParams tp;
  tp.tag = fam.tag;
  switch (fam.tag) {
    case FamilyTag::Tsallis: tp.t = fam.p1; break;
    case FamilyTag::Kaniadakis: tp.k = fam.p1; break;
    case FamilyTag::Abe: tp.z = fam.p1; break;
    case FamilyTag::Gamma: tp.g = fam.p1; break;
    case FamilyTag::Kls: tp.k = fam.p1; tp.r = fam.p2; break;
    case FamilyTag::GeneralAB: tp.a = fam.p1; tp.b = fam.p2; break;
    default: break;
  }
  return tp;
}

double table_x(const TableParams& f, double rho) {
  switch (f.tag) {
    case FamilyTag::Shannon:
      return 1.0;
    case FamilyTag::Tsallis:
      return pow_nn(rho, f.t - 1.0);
    case FamilyTag::Kaniadakis:
      return 0.5 * pow_nn(rho, f.k) + 0.5 * pow_nn(rho, -f.k);
    case FamilyTag::Abe:
      return (f.z / (f.z + 1.0)) * pow_nn(rho, f.z - 1.0) +
             (1.0 / (f.z + 1.0)) * pow_nn(rho, 1.0 / f.z - 1.0);
    case FamilyTag::Gamma:
      return (2.0 / 3.0) * pow_nn(rho, 2.0 * f.g) + (1.0 / 3.0) * pow_nn(rho, -f.g);
    case FamilyTag::Kls:
      return ((f.k + f.r) / (2.0 * f.k)) * pow_nn(rho, f.r + f.k) +
             ((f.k - f.r) / (2.0 * f.k)) * pow_nn(rho, f.r - f.k);
    case FamilyTag::GeneralAB:
      return ((f.a - 1.0) / (f.a - f.b)) * pow_nn(rho, f.a - 1.0) +
             ((1.0 - f.b) / (f.a - f.b)) * pow_nn(rho, f.b - 1.0);
    case FamilyTag::Newton:
      return 0.5 * rho + 0.5;
    default:
      throw UnsupportedError("no tabulated gradient for this family");
  }
}

double table_t(const TableParams& f, double rho) {
  switch (f.tag) {
    case FamilyTag::Shannon:
      return (checked_log(rho) - 1.0) / rho;
    case FamilyTag::Tsallis:
      return (f.t / (1.0 - f.t)) * pow_nn(rho, -f.t) - (1.0 / (1.0 - f.t)) / rho;
    case FamilyTag::Kaniadakis:
      return ((1.0 - f.k) / (2.0 * f.k)) * pow_nn(rho, f.k - 1.0) -
             ((1.0 + f.k) / (2.0 * f.k)) * pow_nn(rho, -f.k - 1.0);
    case FamilyTag::Abe:
      return (f.z * f.z / (1.0 - f.z * f.z)) * pow_nn(rho, -f.z) -
             (1.0 / (1.0 - f.z * f.z)) * pow_nn(rho, -1.0 / f.z);
    case FamilyTag::Gamma:
      return ((1.0 - f.g) / (3.0 * f.g)) * pow_nn(rho, f.g - 1.0) -
             ((1.0 + 2.0 * f.g) / (3.0 * f.g)) * pow_nn(rho, -2.0 * f.g - 1.0);
    case FamilyTag::Kls:
      return ((1.0 + f.r - f.k) / (2.0 * f.k)) * pow_nn(rho, f.k - f.r - 1.0) -
             ((1.0 + f.r + f.k) / (2.0 * f.k)) * pow_nn(rho, -f.k - f.r - 1.0);
    case FamilyTag::GeneralAB:
      return (f.b / (f.a - f.b)) * pow_nn(rho, -f.b) - (f.a / (f.a - f.b)) * pow_nn(rho, -f.a);
    case FamilyTag::Newton:
      return 0.5 * checked_log(rho) / rho - 1.0 / (rho * rho);
    default:
      throw UnsupportedError("no tabulated gradient for this family");
  }
}

double table_z(const TableParams& f, double q) {
  switch (f.tag) {
    case FamilyTag::Shannon:
      return 1.0;
    case FamilyTag::Tsallis:
      return f.t * pow_nn(q, f.t - 1.0);
    case FamilyTag::Kaniadakis:
      return ((1.0 + f.k) / 2.0) * pow_nn(q, f.k) + ((1.0 - f.k) / 2.0) * pow_nn(q, -f.k);
    case FamilyTag::Abe:
      return (f.z * f.z / (f.z + 1.0)) * pow_nn(q, f.z - 1.0) +
             (1.0 / (f.z * (f.z + 1.0))) * pow_nn(q, 1.0 / f.z - 1.0);
    case FamilyTag::Gamma:
      return (2.0 * (2.0 * f.g + 1.0) / 3.0) * pow_nn(q, 2.0 * f.g) +
             ((1.0 - f.g) / 3.0) * pow_nn(q, -f.g);
    case FamilyTag::Kls:
      return ((f.r + f.k) * (1.0 + f.r + f.k) / (2.0 * f.k)) * pow_nn(q, f.r + f.k) +
             ((f.k - f.r) * (1.0 + f.r - f.k) / (2.0 * f.k)) * pow_nn(q, f.r - f.k);
    case FamilyTag::GeneralAB:
      return ((f.a * f.a - f.a) / (f.a - f.b)) * pow_nn(q, f.a - 1.0) +
             ((f.b - f.b * f.b) / (f.a - f.b)) * pow_nn(q, f.b - 1.0);
    case FamilyTag::Newton:
      return 0.5 + q;
    default:
      throw UnsupportedError("no tabulated gradient for this family");
  }
}

double table_dual_bregman(const TableParams& f, double p, double q) {
  switch (f.tag) {
    case FamilyTag::Shannon:
      return checked_log(p) - checked_log(q);
    case FamilyTag::Tsallis:
      return (f.t / (f.t - 1.0)) * (pow_nn(p, f.t - 1.0) - pow_nn(q, f.t - 1.0));
    case FamilyTag::Kaniadakis:
      return ((1.0 + f.k) / (2.0 * f.k)) * (pow_nn(p, f.k) - pow_nn(q, f.k)) -
             ((1.0 - f.k) / (2.0 * f.k)) * (pow_nn(p, -f.k) - pow_nn(q, -f.k));
    case FamilyTag::Abe: {
      const double z2 = f.z * f.z;
      return (z2 / (z2 - 1.0)) * (pow_nn(p, f.z - 1.0) - pow_nn(q, f.z - 1.0)) -
             (1.0 / (z2 - 1.0)) * (pow_nn(p, 1.0 / f.z - 1.0) - pow_nn(q, 1.0 / f.z - 1.0));
    }
    case FamilyTag::Gamma:
      return ((2.0 * f.g + 1.0) / (3.0 * f.g)) * (pow_nn(p, 2.0 * f.g) - pow_nn(q, 2.0 * f.g)) -
             ((1.0 - f.g) / (3.0 * f.g)) * (pow_nn(p, -f.g) - pow_nn(q, -f.g));
    case FamilyTag::Kls:
      return ((1.0 + f.r + f.k) / (2.0 * f.k)) *
                 (pow_nn(p, f.r + f.k) - pow_nn(q, f.r + f.k)) -
             ((1.0 + f.r - f.k) / (2.0 * f.k)) * (pow_nn(p, f.r - f.k) - pow_nn(q, f.r - f.k));
    case FamilyTag::GeneralAB:
      return (f.a / (f.a - f.b)) * (pow_nn(p, f.a - 1.0) - pow_nn(q, f.a - 1.0)) -
             (f.b / (f.a - f.b)) * (pow_nn(p, f.b - 1.0) - pow_nn(q, f.b - 1.0));
    case FamilyTag::Newton:
      return (p - q) + 0.5 * (checked_log(p) - checked_log(q));
    default:
      throw UnsupportedError("no tabulated gradient for this family");
  }
}

}  // namespace

Vector tabulated_neg_grad(const DivergenceSpec& spec, const Vector& p, const Vector& q) {
  validate(spec);
  if (spec.variant != Variant::Plain)
    throw UnsupportedError("tabulated gradients cover the plain variant only");
  if (spec.family.tag == FamilyTag::Alpha)
    throw UnsupportedError("no tabulated gradient for the alpha family");
  check_pair(p, q);
  check_positive(q, "q");

  const TableParams tp = table_params(spec.family);
  Vector g(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double rho = p[i] / q[i];
    switch (spec.form) {
      case Form::Csiszar:
        g[i] = rho * table_x(tp, rho) - 1.0;
        break;
      case Form::CsiszarDual:
        g[i] = rho * table_t(tp, rho) + 1.0;
        break;
      case Form::Bregman:
        g[i] = (rho - 1.0) * table_z(tp, q[i]);
        break;
      case Form::BregmanDual:
        g[i] = table_dual_bregman(tp, p[i], q[i]);
        break;
    }
  }
  return g;
}

}  // namespace dsgm
