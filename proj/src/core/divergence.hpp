#pragma once

#include "core/entropy.hpp"
#include "core/vec.hpp"

namespace dsgm {

// ============================================================================
// Divergences over non-negative data vectors.
//
// Four constructions share one entropy kernel f:
//
//   Csiszar       C(p||q)  = sum_i q_i f_c(p_i / q_i)
//   CsiszarDual   C(q||p)
//   Bregman       B(p||q)  = sum_i f(p_i) - f(q_i) - (p_i - q_i) f'(q_i)
//   BregmanDual   B(q||p)
//
// All gradients below are *negative* gradients with respect to q, the
// direction a descent scheme moves in.
// ============================================================================

enum class Form { Csiszar, CsiszarDual, Bregman, BregmanDual };

// Plain divergences compare p and q directly; Invariant ones first rescale q
// by a factor K(p, q) so the result is insensitive to the scale of q.
enum class Variant { Plain, Invariant };

// Scale factor used by the Invariant variant: the reference choice
// sum(p)/sum(q), or the stationary ("nominal") factor of the Tsallis family.
enum class FactorChoice { ReferenceSumRatio, NominalTsallis };

struct DivergenceSpec {
  EntropyFamily family;
  Form form = Form::Csiszar;
  Variant variant = Variant::Plain;
  FactorChoice factor = FactorChoice::ReferenceSumRatio;
};

// Rejects combinations that are deliberately not provided: Bregman forms for
// the Alpha family, Invariant variants for Newton/Alpha, NominalTsallis with
// a family other than Tsallis.
void validate(const DivergenceSpec& spec);

// Additive decomposition of a negative gradient into non-negative parts,
// u - v = -grad componentwise.  Multiplicative and preconditioned iterations
// consume the two parts separately.
struct GradientSplit {
  Vector u;
  Vector v;
};

// --- plain forms -------------------------------------------------------------

double csiszar_value(const EntropyFamily&, const Vector& p, const Vector& q);
double csiszar_dual_value(const EntropyFamily&, const Vector& p, const Vector& q);
double bregman_value(const EntropyFamily&, const Vector& p, const Vector& q);
double bregman_dual_value(const EntropyFamily&, const Vector& p, const Vector& q);

Vector csiszar_neg_grad(const EntropyFamily&, const Vector& p, const Vector& q);
Vector csiszar_dual_neg_grad(const EntropyFamily&, const Vector& p, const Vector& q);
Vector bregman_neg_grad(const EntropyFamily&, const Vector& p, const Vector& q);
Vector bregman_dual_neg_grad(const EntropyFamily&, const Vector& p, const Vector& q);

// --- unified dispatch over the full spec (plain and invariant) ---------------

double divergence_value(const DivergenceSpec&, const Vector& p, const Vector& q);
Vector divergence_neg_grad(const DivergenceSpec&, const Vector& p, const Vector& q);
GradientSplit neg_grad_split(const DivergenceSpec&, const Vector& p, const Vector& q);

// Second, independent gradient path: per-family closed-form tables, written
// directly in family parameters rather than through the kernel derivatives.
// Plain variant only; the Alpha family has no table.  Used to cross-check the
// canonical path.
Vector tabulated_neg_grad(const DivergenceSpec&, const Vector& p, const Vector& q);

}  // namespace dsgm
