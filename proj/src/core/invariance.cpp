#include "core/invariance.hpp"

#include <cmath>
#include <cstddef>

#include "core/error.hpp"

namespace dsgm {

namespace {

struct NormalizedPair {
  Vector pbar, qbar;
  double sum_p = 0.0, sum_q = 0.0;
};

// Computed once per evaluation and shared by the factor, value, and gradient
// paths so they all see identical sums.
NormalizedPair make_normalized(const Vector& p, const Vector& q) {
  check_finite_nonneg(p, "p");
  check_positive(q, "q");
  check_same_length(p, q, "p", "q");
  NormalizedPair np;
  np.sum_p = vsum(p);
  np.sum_q = vsum(q);
  if (!(np.sum_p > 0.0)) throw EvalError("sum of p must be strictly positive");
  if (!(np.sum_q > 0.0)) throw EvalError("sum of q must be strictly positive");
  np.pbar = scaled(p, 1.0 / np.sum_p);
  np.qbar = scaled(q, 1.0 / np.sum_q);
  return np;
}

double require_tsallis(const EntropyFamily& fam) {
  validate(fam);
  if (fam.tag != FamilyTag::Tsallis)
    throw UnsupportedError("nominal factors are only defined for the tsallis family");
  return fam.p1;
}

void require_dual_index(double t) {
  if (std::fabs(t - 1.0) <= kLimitGap)
    throw EvalError("dual nominal factors are singular at t = 1");
}

// Every factor is (sum_p/sum_q) times a correction computed from normalized
// vectors, which keeps the scaling law exact up to rounding.
double factor_from(FactorKind kind, const EntropyFamily& fam, const NormalizedPair& np) {
  const double ratio = np.sum_p / np.sum_q;
  if (kind == FactorKind::ReferenceSumRatio) return ratio;

  const double t = require_tsallis(fam);
  const std::size_t n = np.pbar.size();
  switch (kind) {
    case FactorKind::CsiszarTsallisNominal: {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        m += pow_nn(np.pbar[i], t) * pow_nn(np.qbar[i], 1.0 - t);
      return ratio * std::pow(m, 1.0 / t);
    }
    case FactorKind::CsiszarDualTsallisNominal: {
      require_dual_index(t);
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        m += pow_nn(np.qbar[i], t) * pow_nn(np.pbar[i], 1.0 - t);
      return ratio * std::pow(m, 1.0 / (1.0 - t));
    }
    case FactorKind::BregmanTsallisNominal: {
      double m = 0.0, nq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        m += np.pbar[i] * pow_nn(np.qbar[i], t - 1.0);
        nq += pow_nn(np.qbar[i], t);
      }
      return ratio * (m / nq);
    }
    case FactorKind::BregmanDualTsallisNominal: {
      require_dual_index(t);
      double m = 0.0, nq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        m += np.qbar[i] * pow_nn(np.pbar[i], t - 1.0);
        nq += pow_nn(np.qbar[i], t);
      }
      return ratio * std::pow(nq / m, 1.0 / (1.0 - t));
    }
    default:
      break;
  }
  throw EvalError("unknown invariance factor kind");
}

void check_invariant_spec(const DivergenceSpec& spec) {
  validate(spec);
  if (spec.variant != Variant::Invariant)
    throw DomainError("spec must use the invariant variant");
}

// Per-component decomposition of the plain negative gradient evaluated at
// (p, K q): core[j] = pos[j] - neg[j], with both sides non-negative.  The
// centered combination below turns it into the invariant gradient and split.
struct CoreTerms {
  Vector pos, neg;
};

CoreTerms reference_core(const DivergenceSpec& spec, const NormalizedPair& np, const Vector& p,
                         const Vector& q) {
  const EntropyFamily& fam = spec.family;
  const auto ab = to_ab(fam);
  if (!ab)
    throw UnsupportedError("invariant divergences are only provided for families with an "
                           "exponent-pair reduction");
  const double a = ab->a, b = ab->b, gap = ab->gap();
  const bool degenerate = std::fabs(gap) <= kLimitGap;
  const double K = np.sum_p / np.sum_q;
  const std::size_t n = p.size();
  CoreTerms ct{Vector(n, 0.0), Vector(n, 0.0)};

  auto route = [](CoreTerms& c, std::size_t j, double term) {
    (term >= 0.0 ? c.pos[j] : c.neg[j]) += std::fabs(term);
  };

  switch (spec.form) {
    case Form::Csiszar: {
      if (degenerate) {
        // limit of the coefficient form: rbar^a (1 + (a-1) ln rbar)
        for (std::size_t j = 0; j < n; ++j) {
          const double r = np.pbar[j] / np.qbar[j];
          const double w = r == 0.0 ? 0.0 : std::pow(r, a) * (1.0 + (a - 1.0) * std::log(r));
          route(ct, j, w);
          ct.neg[j] += 1.0;
        }
        return ct;
      }
      const double c1 = (a - 1.0) / gap, c2 = (1.0 - b) / gap;
      for (std::size_t j = 0; j < n; ++j) {
        const double r = np.pbar[j] / np.qbar[j];
        route(ct, j, c1 * pow_nn(r, a));
        route(ct, j, c2 * pow_nn(r, b));
        ct.neg[j] += 1.0;
      }
      return ct;
    }
    case Form::CsiszarDual: {
      check_positive(p, "p");
      if (degenerate) {
        for (std::size_t j = 0; j < n; ++j) {
          const double r = np.pbar[j] / np.qbar[j];
          ct.pos[j] += 1.0;
          route(ct, j, -std::pow(r, 1.0 - a) * (1.0 - a * std::log(r)));
        }
        return ct;
      }
      const double wa = a / gap, wb = b / gap;
      for (std::size_t j = 0; j < n; ++j) {
        const double r = np.pbar[j] / np.qbar[j];
        ct.pos[j] += 1.0;
        route(ct, j, -wa * pow_nn(r, 1.0 - a));
        route(ct, j, wb * pow_nn(r, 1.0 - b));
      }
      return ct;
    }
    case Form::Bregman: {
      for (std::size_t j = 0; j < n; ++j) {
        const double kq = K * q[j];
        const double z = kq * f_second(fam, kq);
        route(ct, j, z * (p[j] / kq));
        route(ct, j, -z);
      }
      return ct;
    }
    case Form::BregmanDual: {
      check_positive(p, "p");
      for (std::size_t j = 0; j < n; ++j) {
        route(ct, j, f_prime(fam, p[j]));
        route(ct, j, -f_prime(fam, K * q[j]));
      }
      return ct;
    }
  }
  throw EvalError("unknown divergence form");
}

GradientSplit centered_split(const CoreTerms& ct, const NormalizedPair& np) {
  const double K = np.sum_p / np.sum_q;
  const std::size_t n = ct.pos.size();
  double spos = 0.0, sneg = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    spos += np.qbar[i] * ct.pos[i];
    sneg += np.qbar[i] * ct.neg[i];
  }
  GradientSplit s{Vector(n), Vector(n)};
  for (std::size_t j = 0; j < n; ++j) {
    s.u[j] = K * (ct.pos[j] + sneg);
    s.v[j] = K * (ct.neg[j] + spos);
  }
  return s;
}

GradientSplit nominal_split(const DivergenceSpec& spec, const NormalizedPair& np, const Vector& p,
                            const Vector& q) {
  const double t = require_tsallis(spec.family);
  const double ratio = np.sum_p / np.sum_q;
  const std::size_t n = p.size();
  GradientSplit s{Vector(n), Vector(n)};

  switch (spec.form) {
    case Form::Csiszar: {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        m += pow_nn(np.pbar[i], t) * pow_nn(np.qbar[i], 1.0 - t);
      const double c = ratio * std::pow(m, 1.0 / t - 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        s.u[j] = c * pow_nn(np.pbar[j] / np.qbar[j], t);
        s.v[j] = c * m;
      }
      return s;
    }
    case Form::CsiszarDual: {
      check_positive(p, "p");
      const double k0 = factor_from(FactorKind::CsiszarDualTsallisNominal, spec.family, np);
      const double cf = t / (1.0 - t), kt = std::pow(k0, t);
      for (std::size_t j = 0; j < n; ++j) {
        const double term = kt * pow_nn(p[j] / q[j], 1.0 - t);
        s.u[j] = std::fabs(cf) * (cf >= 0.0 ? term : k0);
        s.v[j] = std::fabs(cf) * (cf >= 0.0 ? k0 : term);
      }
      return s;
    }
    case Form::Bregman: {
      const double k0 = factor_from(FactorKind::BregmanTsallisNominal, spec.family, np);
      const double c = t * std::pow(k0, t - 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double qp = pow_nn(q[j], t - 2.0);
        s.u[j] = c * qp * p[j];
        s.v[j] = c * qp * k0 * q[j];
      }
      return s;
    }
    case Form::BregmanDual: {
      check_positive(p, "p");
      const double k0 = factor_from(FactorKind::BregmanDualTsallisNominal, spec.family, np);
      const double cf = t / (t - 1.0) * k0, kt = std::pow(k0, t - 1.0);
      for (std::size_t j = 0; j < n; ++j) {
        const double tp = pow_nn(p[j], t - 1.0), tq = kt * pow_nn(q[j], t - 1.0);
        s.u[j] = std::fabs(cf) * (cf >= 0.0 ? tp : tq);
        s.v[j] = std::fabs(cf) * (cf >= 0.0 ? tq : tp);
      }
      return s;
    }
  }
  throw EvalError("unknown divergence form");
}

}  // namespace

FactorKind factor_kind_for(const DivergenceSpec& spec) {
  if (spec.factor == FactorChoice::ReferenceSumRatio) return FactorKind::ReferenceSumRatio;
  switch (spec.form) {
    case Form::Csiszar: return FactorKind::CsiszarTsallisNominal;
    case Form::CsiszarDual: return FactorKind::CsiszarDualTsallisNominal;
    case Form::Bregman: return FactorKind::BregmanTsallisNominal;
    case Form::BregmanDual: return FactorKind::BregmanDualTsallisNominal;
  }
  throw EvalError("unknown divergence form");
}

double invariance_factor(FactorKind kind, const EntropyFamily& fam, const Vector& p,
                         const Vector& q) {
  return factor_from(kind, fam, make_normalized(p, q));
}

double nominal_stationarity_residual(FactorKind kind, const EntropyFamily& fam, const Vector& p,
                                     const Vector& q) {
  if (kind == FactorKind::ReferenceSumRatio)
    throw UnsupportedError("the reference factor has no stationarity residual");
  const NormalizedPair np = make_normalized(p, q);
  const double t = require_tsallis(fam);
  const double k = factor_from(kind, fam, np);
  const std::size_t n = p.size();

  switch (kind) {
    case FactorKind::CsiszarTsallisNominal: {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += pow_nn(p[i], t) * pow_nn(q[i], 1.0 - t);
      return np.sum_q - std::pow(k, -t) * m;
    }
    case FactorKind::CsiszarDualTsallisNominal: {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) m += pow_nn(q[i], t) * pow_nn(p[i], 1.0 - t);
      return t / (t - 1.0) * (std::pow(k, t - 1.0) * m - np.sum_q);
    }
    case FactorKind::BregmanTsallisNominal: {
      double m = 0.0, nq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        m += p[i] * pow_nn(q[i], t - 1.0);
        nq += pow_nn(q[i], t);
      }
      return t * std::pow(k, t - 2.0) * (k * nq - m);
    }
    case FactorKind::BregmanDualTsallisNominal: {
      double m = 0.0, nq = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        m += q[i] * pow_nn(p[i], t - 1.0);
        nq += pow_nn(q[i], t);
      }
      return t / (t - 1.0) * (std::pow(k, t - 1.0) * nq - m);
    }
    default:
      break;
  }
  throw EvalError("unknown invariance factor kind");
}

double invariant_value(const DivergenceSpec& spec, const Vector& p, const Vector& q) {
  check_invariant_spec(spec);
  const double k = invariance_factor(factor_kind_for(spec), spec.family, p, q);
  switch (spec.form) {
    case Form::Csiszar: return csiszar_value(spec.family, p, scaled(q, k));
    case Form::CsiszarDual: return csiszar_value(spec.family, scaled(q, k), p);
    case Form::Bregman: return bregman_value(spec.family, p, scaled(q, k));
    case Form::BregmanDual: return bregman_value(spec.family, scaled(q, k), p);
  }
  throw EvalError("unknown divergence form");
}

GradientSplit invariant_neg_grad_split(const DivergenceSpec& spec, const Vector& p,
                                       const Vector& q) {
  check_invariant_spec(spec);
  const NormalizedPair np = make_normalized(p, q);
  if (spec.factor == FactorChoice::NominalTsallis) return nominal_split(spec, np, p, q);
  return centered_split(reference_core(spec, np, p, q), np);
}

Vector invariant_neg_grad(const DivergenceSpec& spec, const Vector& p, const Vector& q) {
  const GradientSplit s = invariant_neg_grad_split(spec, p, q);
  Vector g(s.u.size());
  for (std::size_t j = 0; j < g.size(); ++j) g[j] = s.u[j] - s.v[j];
  return g;
}

}  // namespace dsgm
