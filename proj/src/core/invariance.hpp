#pragma once

#include "core/divergence.hpp"
#include "core/entropy.hpp"
#include "core/vec.hpp"

namespace dsgm {

// Scale-invariant divergences are built by evaluating a plain divergence at
// (p, K q), where the positive factor K(p, q) satisfies the scaling law
// K(p, lambda q) = K(p, q)/lambda so that K q does not move when q is
// rescaled.  The reference choice is the sum ratio; the nominal choices make
// K stationary for the divergence, which has a closed form for the tsallis
// family only.
enum class FactorKind {
  ReferenceSumRatio,
  CsiszarTsallisNominal,
  CsiszarDualTsallisNominal,
  BregmanTsallisNominal,
  BregmanDualTsallisNominal,
};

// The kind a given spec resolves to.
FactorKind factor_kind_for(const DivergenceSpec& spec);

double invariance_factor(FactorKind kind, const EntropyFamily& family, const Vector& p,
                         const Vector& q);

// d D(p, K q) / dK evaluated at K = invariance_factor(kind, ...); close to
// zero for every nominal kind.  The reference kind has no stationarity
// property and is rejected.
double nominal_stationarity_residual(FactorKind kind, const EntropyFamily& family,
                                     const Vector& p, const Vector& q);

double invariant_value(const DivergenceSpec& spec, const Vector& p, const Vector& q);
Vector invariant_neg_grad(const DivergenceSpec& spec, const Vector& p, const Vector& q);
GradientSplit invariant_neg_grad_split(const DivergenceSpec& spec, const Vector& p,
                                       const Vector& q);

}  // namespace dsgm
