#pragma once

#include <optional>
#include <string>
#include <vector>

namespace dsgm {

// ============================================================================
// Entropy family zoo.
//
// Every family is generated by a convex base function f on (0, inf) with
// f(1) = 0.  Six of them reduce to the two-power kernel
//
//     f(x) = (x^a - x^b) / (a - b)
//
// for an exponent pair (a, b); Shannon is the a = b = 1 limit x*log(x), and
// the Newton and Alpha families do not reduce and carry their own kernels.
// ============================================================================

enum class FamilyTag {
  Shannon,
  Tsallis,
  Kaniadakis,
  Abe,
  Gamma,
  Kls,
  GeneralAB,
  Newton,
  Alpha,
};

// Exponent pair of the two-power kernel.  Shannon reduces to the sentinel
// (1, 1); all other reducible families produce a != b.
struct ABPair {
  double a = 1.0;
  double b = 1.0;
  double gap() const { return a - b; }
};

// Below this exponent gap the kernel switches to its analytic limit form
// x^a * log(x) to avoid catastrophic cancellation.
inline constexpr double kLimitGap = 1e-8;

// Tagged family with parameters.  Use the named constructors; they validate
// the parameter domain and throw DomainError otherwise.
struct EntropyFamily {
  FamilyTag tag = FamilyTag::Shannon;
  double p1 = 0.0;  // t (Tsallis), K (Kaniadakis/Kls), z (Abe), g (Gamma),
                    // a (GeneralAB), alpha (Alpha)
  double p2 = 0.0;  // r (Kls), b (GeneralAB)

  static EntropyFamily shannon();
  static EntropyFamily tsallis(double t);        // t > 0
  static EntropyFamily kaniadakis(double k);     // 0 < |K| < 1
  static EntropyFamily abe(double z);            // z > 0, z != 1
  static EntropyFamily gamma_family(double g);   // -0.5 <= g <= 1, g != 0
  static EntropyFamily kls(double k, double r);  // K != 0, -|K| <= r <= |K|
  static EntropyFamily general_ab(double a, double b);
  static EntropyFamily newton();
  static EntropyFamily alpha(double alpha);      // 0 < |alpha| <= 0.5
};

// Throws DomainError when the parameters are outside the documented domain.
void validate(const EntropyFamily& family);

// Non-fatal notes: parameter ranges where the divergences below remain
// well defined but the deformed logarithm loses concavity (or, for extreme
// two-parameter settings, the base function loses convexity near zero).
std::vector<std::string> diagnostics(const EntropyFamily& family);

// Exponent-pair reduction.  nullopt for Newton and Alpha, which must be
// handled by their family-specific kernels.
std::optional<ABPair> to_ab(const EntropyFamily& family);

// Base convex function f.  Defined for x >= 0 whenever the limit exists
// (0*log(0) is taken as 0); throws EvalError where the expression is
// singular, e.g. x = 0 against a negative exponent.
double f(const EntropyFamily& family, double x);

// First and second derivatives of f (x > 0).  f_second is Unsupported for
// the Alpha family, whose Bregman constructions are not provided.
double f_prime(const EntropyFamily& family, double x);
double f_second(const EntropyFamily& family, double x);

// Standard form f_c(x) = f(x) - x + 1, normalised so that f_c(1) = 0 and
// f_c'(1) = 0; f_c >= 0 on the family domains.
double f_standard(const EntropyFamily& family, double x);

// Deformed logarithm of the family (x > 0).
double deformed_log(const EntropyFamily& family, double x);

// Text form used by configuration files, e.g. "tsallis t=1.5",
// "general a=1.5 b=0.5", "kls k=0.4 r=0.2".
EntropyFamily parse_family(const std::string& text);
std::string family_key(const EntropyFamily& family);

}  // namespace dsgm
