#include <doctest.h>

#include <cmath>
#include <vector>

#include "core/entropy.hpp"
#include "core/error.hpp"
#include "support/oracle.hpp"

using dsgm::EntropyFamily;
using dsgm::FamilyTag;

namespace {

// Families used for derivative sweeps; covers every tag and both signs of the
// asymmetric parameters.
std::vector<EntropyFamily> sweep_families() {
  return {
      EntropyFamily::shannon(),
      EntropyFamily::tsallis(0.5),
      EntropyFamily::tsallis(1.5),
      EntropyFamily::tsallis(2.0),
      EntropyFamily::kaniadakis(0.5),
      EntropyFamily::kaniadakis(-0.3),
      EntropyFamily::abe(2.0),
      EntropyFamily::abe(0.5),
      EntropyFamily::gamma_family(0.5),
      EntropyFamily::gamma_family(-0.3),
      EntropyFamily::gamma_family(1.0),
      EntropyFamily::kls(0.4, 0.2),
      EntropyFamily::kls(-0.9, -0.9),
      EntropyFamily::general_ab(1.5, 0.5),
      EntropyFamily::general_ab(0.2, 1.8),
      EntropyFamily::newton(),
      EntropyFamily::alpha(0.25),
      EntropyFamily::alpha(-0.5),
  };
}

const double kPoints[] = {0.3, 0.9, 1.0, 1.7, 2.5, 7.0};

}  // namespace

// Finite-difference oracles come first: they pin down f' and f'' from value
// evaluations alone.

TEST_CASE("f_prime matches finite differences of f") {
  for (const EntropyFamily& fam : sweep_families()) {
    CAPTURE(dsgm::family_key(fam));
    for (double x : kPoints) {
      const double h = 1e-6 * std::max(x, 1.0);
      const double fd =
          oracle::fd_derivative([&](double t) { return dsgm::f(fam, t); }, x, h);
      CHECK(oracle::grad_err(dsgm::f_prime(fam, x), fd) < 1e-6);
    }
  }
}

TEST_CASE("f_second matches finite differences of f_prime") {
  for (const EntropyFamily& fam : sweep_families()) {
    if (fam.tag == FamilyTag::Alpha) continue;
    CAPTURE(dsgm::family_key(fam));
    for (double x : kPoints) {
      const double h = 1e-6 * std::max(x, 1.0);
      const double fd =
          oracle::fd_derivative([&](double t) { return dsgm::f_prime(fam, t); }, x, h);
      CHECK(oracle::grad_err(dsgm::f_second(fam, x), fd) < 1e-6);
    }
  }
}

TEST_CASE("deformed_log derivative is consistent with the kernel") {
  // For the two-power kernel, d/dx [x * deformed_log-part] relates to f', but
  // a direct property is simpler: the deformed log vanishes at 1 and
  // increases.
  for (const EntropyFamily& fam : sweep_families()) {
    CAPTURE(dsgm::family_key(fam));
    CHECK(dsgm::deformed_log(fam, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(dsgm::deformed_log(fam, 2.0) > 0.0);
    CHECK(dsgm::deformed_log(fam, 0.5) < 0.0);
  }
}

TEST_CASE("fixed kernel values") {
  const EntropyFamily sh = EntropyFamily::shannon();
  CHECK(dsgm::f(sh, 2.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-15));
  CHECK(dsgm::f_standard(sh, 2.0) == doctest::Approx(0.3862943611198906).epsilon(1e-15));
  CHECK(dsgm::f(sh, 1.0) == 0.0);
  CHECK(dsgm::f(sh, 0.0) == 0.0);  // 0 log 0 -> 0
  CHECK(dsgm::f_prime(sh, 1.0) == doctest::Approx(1.0));
  CHECK(dsgm::f_second(sh, 2.0) == doctest::Approx(0.5));

  const EntropyFamily t2 = EntropyFamily::tsallis(2.0);
  CHECK(dsgm::f(t2, 3.0) == doctest::Approx(6.0).epsilon(1e-15));
  CHECK(dsgm::f_prime(t2, 3.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(dsgm::f_second(t2, 3.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(dsgm::deformed_log(t2, 4.0) == doctest::Approx(3.0).epsilon(1e-15));

  const EntropyFamily nw = EntropyFamily::newton();
  CHECK(dsgm::f(nw, 2.0) == doctest::Approx(1.0 + std::log(2.0)).epsilon(1e-15));
  CHECK(dsgm::f_prime(nw, 2.0) == doctest::Approx(2.0 + 0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(dsgm::f_second(nw, 2.0) == doctest::Approx(1.25).epsilon(1e-15));

  const EntropyFamily al = EntropyFamily::alpha(0.5);
  CHECK(dsgm::deformed_log(al, 4.0) == doctest::Approx(1.2).epsilon(1e-14));
  CHECK_THROWS_AS(dsgm::f_second(al, 2.0), dsgm::UnsupportedError);

  const EntropyFamily ka = EntropyFamily::kaniadakis(0.5);
  CHECK(dsgm::deformed_log(ka, 4.0) == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("standard form is non-negative with a root at 1") {
  for (const EntropyFamily& fam : sweep_families()) {
    CAPTURE(dsgm::family_key(fam));
    CHECK(dsgm::f_standard(fam, 1.0) == doctest::Approx(0.0).epsilon(1e-14));
    // Non-negativity needs convexity; the extreme kls corner with a negative
    // reduced exponent loses it, and the diagnostics say so.
    const auto ab = dsgm::to_ab(fam);
    if (ab && std::min(ab->a, ab->b) < 0.0) {
      CHECK_FALSE(dsgm::diagnostics(fam).empty());
      continue;
    }
    for (double x : kPoints) CHECK(dsgm::f_standard(fam, x) >= -1e-12);
  }
}

TEST_CASE("exponent pair reductions") {
  auto ab = dsgm::to_ab(EntropyFamily::shannon());
  REQUIRE(ab.has_value());
  CHECK(ab->a == 1.0);
  CHECK(ab->b == 1.0);

  ab = dsgm::to_ab(EntropyFamily::tsallis(1.7));
  CHECK(ab->a == doctest::Approx(1.7));
  CHECK(ab->b == doctest::Approx(1.0));

  ab = dsgm::to_ab(EntropyFamily::kaniadakis(0.4));
  CHECK(ab->a == doctest::Approx(1.4));
  CHECK(ab->b == doctest::Approx(0.6));

  ab = dsgm::to_ab(EntropyFamily::abe(2.0));
  CHECK(ab->a == doctest::Approx(2.0));
  CHECK(ab->b == doctest::Approx(0.5));

  ab = dsgm::to_ab(EntropyFamily::gamma_family(0.5));
  CHECK(ab->a == doctest::Approx(2.0));
  CHECK(ab->b == doctest::Approx(0.5));

  ab = dsgm::to_ab(EntropyFamily::kls(0.4, 0.2));
  CHECK(ab->a == doctest::Approx(1.6));
  CHECK(ab->b == doctest::Approx(0.8));

  // The extreme corner produces a negative reduced exponent.
  ab = dsgm::to_ab(EntropyFamily::kls(-0.9, -0.9));
  CHECK(ab->a == doctest::Approx(-0.8));
  CHECK(ab->b == doctest::Approx(1.0));

  CHECK_FALSE(dsgm::to_ab(EntropyFamily::newton()).has_value());
  CHECK_FALSE(dsgm::to_ab(EntropyFamily::alpha(0.25)).has_value());
}

TEST_CASE("reduced families agree with the explicit two-power kernel") {
  for (const EntropyFamily& fam : sweep_families()) {
    const auto ab = dsgm::to_ab(fam);
    if (!ab || fam.tag == FamilyTag::Shannon) continue;
    CAPTURE(dsgm::family_key(fam));
    for (double x : kPoints) {
      const double direct =
          (std::pow(x, ab->a) - std::pow(x, ab->b)) / (ab->a - ab->b);
      CHECK(oracle::rel_gap(dsgm::f(fam, x), direct) < 1e-12);
    }
  }
}

TEST_CASE("parameter domain validation") {
  CHECK_THROWS_AS(EntropyFamily::tsallis(0.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::tsallis(-1.0), dsgm::DomainError);
  CHECK_NOTHROW(EntropyFamily::tsallis(1.0));  // Shannon limit allowed
  CHECK_THROWS_AS(EntropyFamily::kaniadakis(0.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::kaniadakis(1.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::kaniadakis(-1.5), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::abe(1.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::abe(0.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::abe(-2.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::gamma_family(0.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::gamma_family(1.5), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::gamma_family(-0.6), dsgm::DomainError);
  CHECK_NOTHROW(EntropyFamily::gamma_family(-0.5));
  CHECK_NOTHROW(EntropyFamily::gamma_family(1.0));
  CHECK_THROWS_AS(EntropyFamily::kls(0.0, 0.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::kls(0.4, 0.5), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::kls(0.4, -0.5), dsgm::DomainError);
  CHECK_NOTHROW(EntropyFamily::kls(-0.9, -0.9));
  CHECK_THROWS_AS(EntropyFamily::general_ab(1.5, 1.5), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::general_ab(0.5, 0.7), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::general_ab(1.5, 2.5), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::general_ab(-0.1, 1.5), dsgm::DomainError);
  CHECK_NOTHROW(EntropyFamily::general_ab(0.0, 1.5));
  CHECK_NOTHROW(EntropyFamily::general_ab(2.5, 1.0));
  CHECK_THROWS_AS(EntropyFamily::alpha(0.0), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::alpha(0.6), dsgm::DomainError);
  CHECK_NOTHROW(EntropyFamily::alpha(0.5));
  CHECK_NOTHROW(EntropyFamily::alpha(-0.5));
  const double nan = std::nan("");
  CHECK_THROWS_AS(EntropyFamily::tsallis(nan), dsgm::DomainError);
  CHECK_THROWS_AS(EntropyFamily::kls(0.4, nan), dsgm::DomainError);
}

TEST_CASE("evaluation at zero follows the power conventions") {
  // t < 1: f(0) involves x^t -> 0 and the formula stays finite.
  CHECK(std::isfinite(dsgm::f(EntropyFamily::tsallis(0.5), 0.0)));
  // Negative reduced exponent: singular at zero.
  CHECK_THROWS_AS(dsgm::f(EntropyFamily::kls(-0.9, -0.9), 0.0), dsgm::EvalError);
  CHECK_THROWS_AS(dsgm::f_prime(EntropyFamily::shannon(), 0.0), dsgm::EvalError);
  CHECK_THROWS_AS(dsgm::deformed_log(EntropyFamily::shannon(), 0.0), dsgm::EvalError);
  CHECK_THROWS_AS(dsgm::f(EntropyFamily::shannon(), -1.0), dsgm::EvalError);
}

TEST_CASE("near-degenerate exponent gap uses the analytic limit") {
  const EntropyFamily nearly = EntropyFamily::general_ab(1.0 + 5e-9, 1.0);
  const EntropyFamily sh = EntropyFamily::shannon();
  for (double x : kPoints) {
    CHECK(oracle::grad_err(dsgm::f(nearly, x), dsgm::f(sh, x)) < 1e-7);
    CHECK(oracle::grad_err(dsgm::f_prime(nearly, x), dsgm::f_prime(sh, x)) < 1e-7);
    CHECK(oracle::grad_err(dsgm::f_second(nearly, x), dsgm::f_second(sh, x)) < 1e-7);
  }
}

TEST_CASE("small-parameter families approach the Shannon kernel") {
  const EntropyFamily sh = EntropyFamily::shannon();
  const std::vector<EntropyFamily> near = {
      EntropyFamily::tsallis(1.0 + 1e-6), EntropyFamily::tsallis(1.0 - 1e-6),
      EntropyFamily::kaniadakis(1e-6),    EntropyFamily::kaniadakis(-1e-6),
      EntropyFamily::abe(1.0 + 1e-6),     EntropyFamily::abe(1.0 - 1e-6),
      EntropyFamily::gamma_family(1e-6),  EntropyFamily::gamma_family(-1e-6),
      EntropyFamily::kls(1e-6, 0.0),
  };
  for (const EntropyFamily& fam : near) {
    CAPTURE(dsgm::family_key(fam));
    for (double x : kPoints)
      CHECK(oracle::grad_err(dsgm::f(fam, x), dsgm::f(sh, x)) < 1e-4);
  }
}

TEST_CASE("family text round trips") {
  const char* texts[] = {
      "shannon",        "tsallis t=1.5",         "kaniadakis k=-0.5",
      "abe z=2",        "gamma g=-0.3",          "kls k=0.4 r=0.2",
      "general a=1.5 b=0.5", "newton",           "alpha alpha=0.25",
  };
  for (const char* text : texts) {
    CAPTURE(text);
    const EntropyFamily fam = dsgm::parse_family(text);
    const EntropyFamily again = dsgm::parse_family(dsgm::family_key(fam));
    CHECK(again.tag == fam.tag);
    CHECK(again.p1 == doctest::Approx(fam.p1));
    CHECK(again.p2 == doctest::Approx(fam.p2));
  }
  CHECK_THROWS_AS(dsgm::parse_family(""), dsgm::DomainError);
  CHECK_THROWS_AS(dsgm::parse_family("tsallis"), dsgm::DomainError);
  CHECK_THROWS_AS(dsgm::parse_family("tsallis q=2"), dsgm::DomainError);
  CHECK_THROWS_AS(dsgm::parse_family("tsallis t=zebra"), dsgm::DomainError);
  CHECK_THROWS_AS(dsgm::parse_family("boltzmann"), dsgm::DomainError);
  CHECK_THROWS_AS(dsgm::parse_family("shannon t=1"), dsgm::DomainError);
}

TEST_CASE("diagnostics flag the pathological corners and stay quiet elsewhere") {
  CHECK(dsgm::diagnostics(EntropyFamily::shannon()).empty());
  CHECK(dsgm::diagnostics(EntropyFamily::tsallis(1.5)).empty());
  CHECK_FALSE(dsgm::diagnostics(EntropyFamily::kls(-0.9, -0.9)).empty());
  CHECK_FALSE(dsgm::diagnostics(EntropyFamily::gamma_family(1.0)).empty());
}
