#include "core/entropy.hpp"

#include <cmath>
#include <sstream>

#include "core/error.hpp"

namespace dsgm {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw DomainError(message);
}

// x^e for x >= 0 with the continuity conventions 0^0 = 1 and 0^e = 0 for
// e > 0.  A zero base against a negative exponent is singular.
double pow_nn(double x, double e) {
  if (x == 0.0) {
    if (e > 0.0) return 0.0;
    if (e == 0.0) return 1.0;
    throw EvalError("zero raised to the negative exponent " + num(e));
  }
  if (x < 0.0) throw EvalError("negative base " + num(x) + " in power");
  return std::pow(x, e);
}

double checked_log(double x, const char* who) {
  if (!(x > 0.0)) throw EvalError(std::string(who) + " requires a strictly positive argument");
  return std::log(x);
}

double alpha_of(const EntropyFamily& fam) { return fam.p1; }

}  // namespace

EntropyFamily EntropyFamily::shannon() { return {FamilyTag::Shannon, 0.0, 0.0}; }

EntropyFamily EntropyFamily::tsallis(double t) {
  EntropyFamily fam{FamilyTag::Tsallis, t, 0.0};
  validate(fam);
  return fam;
}

EntropyFamily EntropyFamily::kaniadakis(double k) {
  EntropyFamily fam{FamilyTag::Kaniadakis, k, 0.0};
  validate(fam);
  return fam;
}

EntropyFamily EntropyFamily::abe(double z) {
  EntropyFamily fam{FamilyTag::Abe, z, 0.0};
  validate(fam);
  return fam;
}

EntropyFamily EntropyFamily::gamma_family(double g) {
  EntropyFamily fam{FamilyTag::Gamma, g, 0.0};
  validate(fam);
  return fam;
}

EntropyFamily EntropyFamily::kls(double k, double r) {
  EntropyFamily fam{FamilyTag::Kls, k, r};
  validate(fam);
  return fam;
}

EntropyFamily EntropyFamily::general_ab(double a, double b) {
  EntropyFamily fam{FamilyTag::GeneralAB, a, b};
  validate(fam);
  return fam;
}

EntropyFamily EntropyFamily::newton() { return {FamilyTag::Newton, 0.0, 0.0}; }

EntropyFamily EntropyFamily::alpha(double alpha) {
  EntropyFamily fam{FamilyTag::Alpha, alpha, 0.0};
  validate(fam);
  return fam;
}

void validate(const EntropyFamily& fam) {
  require(std::isfinite(fam.p1) && std::isfinite(fam.p2),
          "family parameters must be finite");
  switch (fam.tag) {
    case FamilyTag::Shannon:
    case FamilyTag::Newton:
      return;
    case FamilyTag::Tsallis:
      require(fam.p1 > 0.0, "tsallis: t must be > 0 (got " + num(fam.p1) + ")");
      return;
    case FamilyTag::Kaniadakis:
      require(std::fabs(fam.p1) > 0.0 && std::fabs(fam.p1) < 1.0,
              "kaniadakis: K must satisfy 0 < |K| < 1 (got " + num(fam.p1) +
                  "); K = 0 is the shannon family");
      return;
    case FamilyTag::Abe:
      require(fam.p1 > 0.0 && fam.p1 != 1.0,
              "abe: z must be > 0 and != 1 (got " + num(fam.p1) +
                  "); z = 1 is the shannon family");
      return;
    case FamilyTag::Gamma:
      require(fam.p1 >= -0.5 && fam.p1 <= 1.0 && fam.p1 != 0.0,
              "gamma: g must lie in [-0.5, 1] with g != 0 (got " + num(fam.p1) + ")");
      return;
    case FamilyTag::Kls:
      require(fam.p1 != 0.0, "kls: K must be nonzero (got " + num(fam.p1) + ")");
      require(std::fabs(fam.p2) <= std::fabs(fam.p1),
              "kls: r must satisfy -|K| <= r <= |K| (got r = " + num(fam.p2) +
                  ", K = " + num(fam.p1) + ")");
      return;
    case FamilyTag::GeneralAB: {
      const double a = fam.p1, b = fam.p2;
      const bool ordered = (0.0 <= a && a <= 1.0 && 1.0 <= b) ||
                           (0.0 <= b && b <= 1.0 && 1.0 <= a);
      require(ordered && a != b,
              "general: exponents must satisfy 0 <= a <= 1 <= b or 0 <= b <= 1 <= a "
              "with a != b (got a = " + num(a) + ", b = " + num(b) + ")");
      return;
    }
    case FamilyTag::Alpha:
      require(std::fabs(fam.p1) > 0.0 && std::fabs(fam.p1) <= 0.5,
              "alpha: parameter must satisfy 0 < |alpha| <= 0.5 (got " + num(fam.p1) + ")");
      return;
  }
  throw DomainError("unknown entropy family tag");
}

std::vector<std::string> diagnostics(const EntropyFamily& fam) {
  std::vector<std::string> notes;
  if (fam.tag == FamilyTag::Gamma && !(fam.p1 > -0.5 && fam.p1 < 0.5)) {
    notes.push_back("gamma = " + num(fam.p1) +
                    " lies outside (-0.5, 0.5): the deformed logarithm is not concave there");
  }
  if (fam.tag == FamilyTag::Kls) {
    const double k = std::fabs(fam.p1), r = fam.p2;
    if (k >= 0.5 && r > 1.0 - k) {
      notes.push_back("kls (K = " + num(fam.p1) + ", r = " + num(r) +
                      "): outside the concavity branch r <= 1 - |K| that applies for |K| >= 1/2");
    }
  }
  if (auto ab = to_ab(fam)) {
    if (std::min(ab->a, ab->b) < 0.0) {
      notes.push_back("reduced exponent pair (" + num(ab->a) + ", " + num(ab->b) +
                      ") has a negative member: the base function is not convex near zero");
    }
    if (std::max(ab->a, ab->b) > 2.0) {
      notes.push_back("reduced exponent pair (" + num(ab->a) + ", " + num(ab->b) +
                      ") exceeds 2: the deformed logarithm is not concave there");
    }
  }
  return notes;
}

std::optional<ABPair> to_ab(const EntropyFamily& fam) {
  validate(fam);
  switch (fam.tag) {
    case FamilyTag::Shannon:
      return ABPair{1.0, 1.0};
    case FamilyTag::Tsallis:
      return ABPair{fam.p1, 1.0};
    case FamilyTag::Kaniadakis:
      return ABPair{1.0 + fam.p1, 1.0 - fam.p1};
    case FamilyTag::Abe:
      return ABPair{fam.p1, 1.0 / fam.p1};
    case FamilyTag::Gamma:
      return ABPair{2.0 * fam.p1 + 1.0, 1.0 - fam.p1};
    case FamilyTag::Kls:
      return ABPair{1.0 + fam.p2 + fam.p1, 1.0 + fam.p2 - fam.p1};
    case FamilyTag::GeneralAB:
      return ABPair{fam.p1, fam.p2};
    case FamilyTag::Newton:
    case FamilyTag::Alpha:
      return std::nullopt;
  }
  return std::nullopt;
}

// --- scalar kernels ---------------------------------------------------------

double f(const EntropyFamily& fam, double x) {
  validate(fam);
  if (!(std::isfinite(x) && x >= 0.0)) throw EvalError("f requires finite x >= 0");
  switch (fam.tag) {
    case FamilyTag::Shannon:
      return x == 0.0 ? 0.0 : x * std::log(x);
    case FamilyTag::Newton:
      return x == 0.0 ? 0.0 : 0.5 * (x * x - x + x * std::log(x));
    case FamilyTag::Alpha: {
      if (x == 0.0) return 0.0;
      const double a = alpha_of(fam);
      return x * std::tanh(a * std::log(x)) / a;
    }
    default: {
      const ABPair ab = *to_ab(fam);
      if (std::fabs(ab.gap()) <= kLimitGap) {
        if (x == 0.0) return 0.0;  // a is near 1 for every reducible family with a tiny gap
        return pow_nn(x, ab.a) * std::log(x);
      }
      return (pow_nn(x, ab.a) - pow_nn(x, ab.b)) / ab.gap();
    }
  }
}

double f_prime(const EntropyFamily& fam, double x) {
  validate(fam);
  if (!(std::isfinite(x) && x >= 0.0)) throw EvalError("f_prime requires finite x >= 0");
  switch (fam.tag) {
    case FamilyTag::Shannon:
      return checked_log(x, "f_prime") + 1.0;
    case FamilyTag::Newton:
      return x + 0.5 * checked_log(x, "f_prime");
    case FamilyTag::Alpha: {
      const double a = alpha_of(fam);
      const double u = a * checked_log(x, "f_prime");
      const double th = std::tanh(u);
      return th / a + (1.0 - th * th);
    }
    default: {
      const ABPair ab = *to_ab(fam);
      if (std::fabs(ab.gap()) <= kLimitGap)
        return pow_nn(x, ab.a - 1.0) * (1.0 + ab.a * checked_log(x, "f_prime"));
      return (ab.a * pow_nn(x, ab.a - 1.0) - ab.b * pow_nn(x, ab.b - 1.0)) / ab.gap();
    }
  }
}

double f_second(const EntropyFamily& fam, double x) {
  validate(fam);
  if (!(std::isfinite(x) && x >= 0.0)) throw EvalError("f_second requires finite x >= 0");
  switch (fam.tag) {
    case FamilyTag::Shannon:
      if (!(x > 0.0)) throw EvalError("f_second requires x > 0");
      return 1.0 / x;
    case FamilyTag::Newton:
      if (!(x > 0.0)) throw EvalError("f_second requires x > 0");
      return 1.0 + 0.5 / x;
    case FamilyTag::Alpha:
      throw UnsupportedError("Bregman constructions are not provided for the alpha family");
    default: {
      const ABPair ab = *to_ab(fam);
      if (std::fabs(ab.gap()) <= kLimitGap)
        return pow_nn(x, ab.a - 2.0) *
               ((2.0 * ab.a - 1.0) + ab.a * (ab.a - 1.0) * checked_log(x, "f_second"));
      return (ab.a * (ab.a - 1.0) * pow_nn(x, ab.a - 2.0) -
              ab.b * (ab.b - 1.0) * pow_nn(x, ab.b - 2.0)) /
             ab.gap();
    }
  }
}

double f_standard(const EntropyFamily& fam, double x) { return f(fam, x) - x + 1.0; }

double deformed_log(const EntropyFamily& fam, double x) {
  validate(fam);
  if (!(std::isfinite(x) && x > 0.0)) throw EvalError("deformed_log requires finite x > 0");
  switch (fam.tag) {
    case FamilyTag::Shannon:
      return std::log(x);
    case FamilyTag::Newton:
      return 0.5 * (x - 1.0 + std::log(x));
    case FamilyTag::Alpha: {
      const double a = alpha_of(fam);
      return std::tanh(a * std::log(x)) / a;
    }
    default: {
      const ABPair ab = *to_ab(fam);
      if (std::fabs(ab.gap()) <= kLimitGap) return pow_nn(x, ab.a - 1.0) * std::log(x);
      return (pow_nn(x, ab.a - 1.0) - pow_nn(x, ab.b - 1.0)) / ab.gap();
    }
  }
}

// --- text form ---------------------------------------------------------------

namespace {

double parse_number(const std::string& token, const std::string& text) {
  try {
    std::size_t used = 0;
    double v = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return v;
  } catch (const std::exception&) {
    throw DomainError("cannot parse numeric value '" + token + "' in family '" + text + "'");
  }
}

}  // namespace

EntropyFamily parse_family(const std::string& text) {
  std::istringstream is(text);
  std::string key;
  if (!(is >> key)) throw DomainError("empty family description");

  std::vector<std::pair<std::string, double>> params;
  std::string tok;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= tok.size())
      throw DomainError("expected name=value parameter, got '" + tok + "' in family '" + text +
                        "'");
    params.emplace_back(tok.substr(0, eq), parse_number(tok.substr(eq + 1), text));
  }

  auto get = [&](std::initializer_list<const char*> names) {
    for (const char* n : names)
      for (const auto& kv : params)
        if (kv.first == n) return kv.second;
    throw DomainError("family '" + key + "' is missing parameter '" +
                      std::string(*names.begin()) + "'");
  };
  auto allow = [&](std::initializer_list<const char*> names) {
    for (const auto& kv : params) {
      bool known = false;
      for (const char* n : names)
        if (kv.first == n) known = true;
      if (!known)
        throw DomainError("unknown parameter '" + kv.first + "' for family '" + key + "'");
    }
  };

  if (key == "shannon") {
    allow({});
    return EntropyFamily::shannon();
  }
  if (key == "tsallis") {
    allow({"t"});
    return EntropyFamily::tsallis(get({"t"}));
  }
  if (key == "kaniadakis") {
    allow({"k"});
    return EntropyFamily::kaniadakis(get({"k"}));
  }
  if (key == "abe") {
    allow({"z"});
    return EntropyFamily::abe(get({"z"}));
  }
  if (key == "gamma") {
    allow({"g"});
    return EntropyFamily::gamma_family(get({"g"}));
  }
  if (key == "kls") {
    allow({"k", "r"});
    return EntropyFamily::kls(get({"k"}), get({"r"}));
  }
  if (key == "general") {
    allow({"a", "b"});
    return EntropyFamily::general_ab(get({"a"}), get({"b"}));
  }
  if (key == "newton") {
    allow({});
    return EntropyFamily::newton();
  }
  if (key == "alpha") {
    allow({"alpha"});
    return EntropyFamily::alpha(get({"alpha"}));
  }
  throw DomainError("unknown family key '" + key + "'");
}

std::string family_key(const EntropyFamily& fam) {
  validate(fam);
  std::ostringstream os;
  os.precision(17);
  switch (fam.tag) {
    case FamilyTag::Shannon: return "shannon";
    case FamilyTag::Tsallis: os << "tsallis t=" << fam.p1; break;
    case FamilyTag::Kaniadakis: os << "kaniadakis k=" << fam.p1; break;
    case FamilyTag::Abe: os << "abe z=" << fam.p1; break;
    case FamilyTag::Gamma: os << "gamma g=" << fam.p1; break;
    case FamilyTag::Kls: os << "kls k=" << fam.p1 << " r=" << fam.p2; break;
    case FamilyTag::GeneralAB: os << "general a=" << fam.p1 << " b=" << fam.p2; break;
    case FamilyTag::Newton: return "newton";
    case FamilyTag::Alpha: os << "alpha alpha=" << fam.p1; break;
  }
  return os.str();
}

}  // namespace dsgm
