#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/divergence.hpp"
#include "core/error.hpp"
#include "support/oracle.hpp"

using dsgm::DivergenceSpec;
using dsgm::EntropyFamily;
using dsgm::FamilyTag;
using dsgm::Form;
using dsgm::Vector;

namespace {

std::vector<EntropyFamily> all_families() {
  return {
      EntropyFamily::shannon(),         EntropyFamily::tsallis(0.5),
      EntropyFamily::tsallis(2.0),      EntropyFamily::kaniadakis(0.5),
      EntropyFamily::kaniadakis(-0.3),  EntropyFamily::abe(2.0),
      EntropyFamily::gamma_family(0.5), EntropyFamily::gamma_family(-0.3),
      EntropyFamily::kls(0.4, 0.2),     EntropyFamily::kls(-0.9, -0.9),
      EntropyFamily::general_ab(1.5, 0.5), EntropyFamily::newton(),
      EntropyFamily::alpha(0.25),
  };
}

const Form kForms[] = {Form::Csiszar, Form::CsiszarDual, Form::Bregman, Form::BregmanDual};

bool has_form(const EntropyFamily& fam, Form form) {
  if (fam.tag == FamilyTag::Alpha)
    return form == Form::Csiszar || form == Form::CsiszarDual;
  return true;
}

DivergenceSpec plain_spec(const EntropyFamily& fam, Form form) {
  DivergenceSpec spec;
  spec.family = fam;
  spec.form = form;
  return spec;
}

// Max componentwise deviation, scaled the way the cross-check tolerances are
// stated: absolute below magnitude 1, relative above.
double max_scaled_dev(const Vector& a, const Vector& b) {
  double dev = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) dev = std::max(dev, oracle::grad_err(a[i], b[i]));
  return dev;
}

// Independent Kullback-Leibler evaluator for the Shannon fixed values.
double kl_direct(const Vector& p, const Vector& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    acc += (p[i] > 0.0 ? p[i] * std::log(p[i] / q[i]) : 0.0) - p[i] + q[i];
  return acc;
}

}  // namespace

// The finite-difference oracle is the ground truth for every gradient in this
// file; it sees only divergence values.

TEST_CASE("plain negative gradients match finite differences") {
  for (const EntropyFamily& fam : all_families()) {
    for (Form form : kForms) {
      if (!has_form(fam, form)) continue;
      const DivergenceSpec spec = plain_spec(fam, form);
      CAPTURE(dsgm::family_key(fam));
      CAPTURE(static_cast<int>(form));
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Vector p = oracle::seeded_vector(seed, 6);
        const Vector q = oracle::seeded_vector(seed + 100, 6);
        const Vector analytic = dsgm::divergence_neg_grad(spec, p, q);
        const Vector fd = oracle::fd_neg_grad(
            [&](const Vector& qq) { return dsgm::divergence_value(spec, p, qq); }, q);
        CHECK(max_scaled_dev(analytic, fd) < 1e-6);
      }
    }
  }
}

TEST_CASE("tabulated gradients agree with the kernel path") {
  for (const EntropyFamily& fam : all_families()) {
    if (fam.tag == FamilyTag::Alpha) continue;
    for (Form form : kForms) {
      const DivergenceSpec spec = plain_spec(fam, form);
      CAPTURE(dsgm::family_key(fam));
      CAPTURE(static_cast<int>(form));
      for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const Vector p = oracle::seeded_vector(seed, 6);
        const Vector q = oracle::seeded_vector(seed + 100, 6);
        const Vector canonical = dsgm::divergence_neg_grad(spec, p, q);
        const Vector tabulated = dsgm::tabulated_neg_grad(spec, p, q);
        CHECK(max_scaled_dev(canonical, tabulated) < 1e-12);
      }
    }
  }
}

TEST_CASE("tabulated path rejects what it does not cover") {
  DivergenceSpec spec = plain_spec(EntropyFamily::alpha(0.25), Form::Csiszar);
  const Vector p{1.0, 2.0}, q{2.0, 1.0};
  CHECK_THROWS_AS(dsgm::tabulated_neg_grad(spec, p, q), dsgm::UnsupportedError);
  spec = plain_spec(EntropyFamily::shannon(), Form::Csiszar);
  spec.variant = dsgm::Variant::Invariant;
  CHECK_THROWS_AS(dsgm::tabulated_neg_grad(spec, p, q), dsgm::UnsupportedError);
}

TEST_CASE("fixed divergence values") {
  const Vector p{1.0, 2.0}, q{2.0, 1.0};

  // Shannon Csiszar is the Kullback-Leibler divergence.
  const double kl = dsgm::csiszar_value(EntropyFamily::shannon(), p, q);
  CHECK(kl == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(kl == doctest::Approx(kl_direct(p, q)).epsilon(1e-14));

  CHECK(dsgm::csiszar_value(EntropyFamily::general_ab(1.5, 0.5), p, q) ==
        doctest::Approx(0.7071067811865476).epsilon(1e-14));
  CHECK(dsgm::bregman_value(EntropyFamily::kaniadakis(0.5), p, q) ==
        doctest::Approx(0.7677669529663688).epsilon(1e-14));
  CHECK(dsgm::csiszar_value(EntropyFamily::tsallis(2.0), {2.0}, {1.0}) ==
        doctest::Approx(1.0).epsilon(1e-14));

  // Kernel-identical families give identical divergences: kaniadakis K=0.5
  // reduces to the same (1.5, 0.5) pair as the general form.
  for (Form form : kForms) {
    const double lhs =
        dsgm::divergence_value(plain_spec(EntropyFamily::kaniadakis(0.5), form), p, q);
    const double rhs =
        dsgm::divergence_value(plain_spec(EntropyFamily::general_ab(1.5, 0.5), form), p, q);
    CHECK(oracle::rel_gap(lhs, rhs) < 1e-14);
  }
}

TEST_CASE("fixed gradient values") {
  const Vector p{2.0}, q{1.0};
  CHECK(dsgm::csiszar_neg_grad(EntropyFamily::shannon(), p, q)[0] ==
        doctest::Approx(1.0).epsilon(1e-14));  // p/q - 1
  CHECK(dsgm::csiszar_neg_grad(EntropyFamily::tsallis(2.0), p, q)[0] ==
        doctest::Approx(3.0).epsilon(1e-14));  // rho^t - 1

  const Vector p4{4.0}, q1{1.0};
  // Newton dual:  (1/2) log rho + 1 - 1/rho  at  rho = 4.
  CHECK(dsgm::csiszar_dual_neg_grad(EntropyFamily::newton(), p4, q1)[0] ==
        doctest::Approx(0.5 * std::log(4.0) + 0.75).epsilon(1e-14));
  // Alpha:  rho * sech^2(alpha log rho) - 1  at  rho = 4, alpha = 1/2.
  const double th = std::tanh(0.5 * std::log(4.0));
  CHECK(dsgm::csiszar_neg_grad(EntropyFamily::alpha(0.5), p4, q1)[0] ==
        doctest::Approx(4.0 * (1.0 - th * th) - 1.0).epsilon(1e-14));
}

TEST_CASE("dual forms swap the arguments") {
  const Vector p = oracle::seeded_vector(3, 6);
  const Vector q = oracle::seeded_vector(17, 6);
  for (const EntropyFamily& fam : all_families()) {
    CAPTURE(dsgm::family_key(fam));
    CHECK(dsgm::csiszar_dual_value(fam, p, q) ==
          doctest::Approx(dsgm::csiszar_value(fam, q, p)).epsilon(1e-15));
    if (fam.tag != FamilyTag::Alpha)
      CHECK(dsgm::bregman_dual_value(fam, p, q) ==
            doctest::Approx(dsgm::bregman_value(fam, q, p)).epsilon(1e-15));
  }
}

TEST_CASE("divergence of a vector with itself vanishes") {
  const Vector p = oracle::seeded_vector(11, 6);
  for (const EntropyFamily& fam : all_families()) {
    for (Form form : kForms) {
      if (!has_form(fam, form)) continue;
      const DivergenceSpec spec = plain_spec(fam, form);
      CAPTURE(dsgm::family_key(fam));
      CAPTURE(static_cast<int>(form));
      CHECK(std::fabs(dsgm::divergence_value(spec, p, p)) <= 1e-12);
      const Vector g = dsgm::divergence_neg_grad(spec, p, p);
      for (double gj : g) CHECK(std::fabs(gj) <= 1e-10);
    }
  }
}

TEST_CASE("gradient splits recombine and stay sign-correct") {
  for (const EntropyFamily& fam : all_families()) {
    for (Form form : kForms) {
      if (!has_form(fam, form)) continue;
      const DivergenceSpec spec = plain_spec(fam, form);
      CAPTURE(dsgm::family_key(fam));
      CAPTURE(static_cast<int>(form));
      for (std::uint64_t seed = 2; seed <= 4; ++seed) {
        const Vector p = oracle::seeded_vector(seed, 6);
        const Vector q = oracle::seeded_vector(seed + 50, 6);
        const Vector g = dsgm::divergence_neg_grad(spec, p, q);
        const dsgm::GradientSplit s = dsgm::neg_grad_split(spec, p, q);
        REQUIRE(s.u.size() == g.size());
        Vector diff(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) {
          CHECK(s.u[i] >= 0.0);
          CHECK(s.v[i] >= 0.0);
          diff[i] = s.u[i] - s.v[i];
        }
        CHECK(max_scaled_dev(diff, g) < 1e-12);
      }
    }
  }
}

TEST_CASE("combination validation") {
  DivergenceSpec spec = plain_spec(EntropyFamily::alpha(0.25), Form::Bregman);
  CHECK_THROWS_AS(dsgm::validate(spec), dsgm::UnsupportedError);
  spec.form = Form::BregmanDual;
  CHECK_THROWS_AS(dsgm::validate(spec), dsgm::UnsupportedError);
  spec.form = Form::Csiszar;
  CHECK_NOTHROW(dsgm::validate(spec));

  spec = plain_spec(EntropyFamily::newton(), Form::Csiszar);
  spec.variant = dsgm::Variant::Invariant;
  CHECK_THROWS_AS(dsgm::validate(spec), dsgm::UnsupportedError);

  spec = plain_spec(EntropyFamily::shannon(), Form::Csiszar);
  spec.factor = dsgm::FactorChoice::NominalTsallis;
  CHECK_THROWS_AS(dsgm::validate(spec), dsgm::UnsupportedError);
  spec.family = EntropyFamily::tsallis(1.5);
  CHECK_NOTHROW(dsgm::validate(spec));
}

TEST_CASE("input validation") {
  const EntropyFamily sh = EntropyFamily::shannon();
  CHECK_THROWS_AS(dsgm::csiszar_value(sh, {1.0, 2.0}, {1.0}), dsgm::LengthMismatch);
  CHECK_THROWS_AS(dsgm::csiszar_value(sh, {-1.0}, {1.0}), dsgm::EvalError);
  CHECK_THROWS_AS(dsgm::csiszar_value(sh, {1.0}, {0.0}), dsgm::EvalError);
  CHECK_THROWS_AS(dsgm::csiszar_value(sh, {}, {}), dsgm::LengthMismatch);
  CHECK_THROWS_AS(dsgm::csiszar_dual_neg_grad(sh, {0.0, 1.0}, {1.0, 1.0}), dsgm::EvalError);
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(dsgm::csiszar_value(sh, {inf}, {1.0}), dsgm::EvalError);
}

TEST_CASE("zero components of p are allowed in the primal forms") {
  const EntropyFamily sh = EntropyFamily::shannon();
  const Vector p{0.0, 2.0}, q{1.0, 1.0};
  // q_i * f_standard(0) = q_i for Shannon.
  CHECK(dsgm::csiszar_value(sh, p, q) ==
        doctest::Approx(1.0 + kl_direct({2.0}, {1.0})).epsilon(1e-14));
  const Vector g = dsgm::csiszar_neg_grad(sh, p, q);
  CHECK(g[0] == doctest::Approx(-1.0).epsilon(1e-14));

  // Families with a negative reduced exponent are singular at rho = 0.
  CHECK_THROWS_AS(dsgm::csiszar_value(EntropyFamily::kls(-0.9, -0.9), p, q), dsgm::EvalError);
}
