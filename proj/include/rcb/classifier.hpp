#pragma once

// Rationality/unirationality decisions for standard 3-fold conic bundles
// from discriminant data. The decision procedure:
//
//   base F_e, discriminant a C0 + b F (fiber pencil meets it in a points):
//     a <= 3       rational       (sufficiency half of the Iskovskikh
//                                  criterion; the criterion excludes one
//                                  special case, flagged in the output)
//     3 < a <= 7   unirational and not rational (the not-rational half is
//                                  Shokurov's theorem for minimal ruled
//                                  bases)
//     a > 7        unknown
//
//   base the plane, discriminant of degree D: blow up a point of
//   multiplicity m on the discriminant (m = 2 at a node, else 1); the
//   transformed bundle over F_1 has a = D - m, and only the
//   unirationality-level conclusions carry over.
//
// Everything outside these hypotheses is Unknown; the criteria are never
// extrapolated.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "rcb/checked.hpp"
#include "rcb/errors.hpp"

namespace rcb {

struct PlaneBase {
  std::int64_t delta_degree = 0;
  // Multiplicities of listed singular points of the discriminant. Empty
  // means smooth (or no singular point is being offered).
  std::vector<std::int64_t> singular_mults;
};

struct HirzebruchBase {
  std::int64_t e = 0;
  std::int64_t a = 0;  // discriminant class a C0 + b F
  std::int64_t b = 0;
};

struct ConicBundleInput {
  std::variant<PlaneBase, HirzebruchBase> base;
  bool is_standard = true;
  std::optional<bool> delta_connected;

  void validate() const {
    if (const auto* pb = std::get_if<PlaneBase>(&base)) {
      if (pb->delta_degree < 0) throw ValidationError("discriminant degree must be non-negative");
      for (std::int64_t m : pb->singular_mults) {
        if (m < 1) throw ValidationError("singular-point multiplicities must be at least 1");
        if (m > pb->delta_degree)
          throw ValidationError("singular-point multiplicity exceeds the discriminant degree");
        if (is_standard && m > 2)
          throw ValidationError(
              "a standard bundle's discriminant has at most ordinary double points "
              "(multiplicity <= 2)");
      }
    } else {
      const auto& hb = std::get<HirzebruchBase>(base);
      if (hb.e < 0) throw ValidationError("Hirzebruch parameter e must be non-negative");
      if (hb.a < 0 || hb.b < 0)
        throw ValidationError("discriminant class coefficients must be non-negative");
    }
  }
};

enum class Outcome { Rational, UnirationalNotRational, Unirational, Unknown };

inline std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Rational: return "Rational";
    case Outcome::UnirationalNotRational: return "UnirationalNotRational";
    case Outcome::Unirational: return "Unirational";
    case Outcome::Unknown: return "Unknown";
  }
  return "Unknown";
}

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::vector<std::string> justification;  // the rules fired, in order
};

// Discriminant data of the bundle over F_1 after blowing up a point of
// multiplicity m on a plane discriminant of degree D: the strict transform
// has class (D - m) C0 + D F.
inline std::pair<std::int64_t, std::int64_t> sarkisov_blowup(std::int64_t D, std::int64_t m) {
  if (m < 1 || m > 2)
    throw ValidationError("blow-up center multiplicity must be 1 or 2 (nodes at worst on a "
                          "standard bundle)");
  if (m > D) throw ValidationError("center multiplicity exceeds the discriminant degree");
  return {checked_sub(D, m), D};
}

namespace detail {

inline const char* kIskovskikhCaveat =
    "caveat: the Iskovskikh criterion excludes one special case, which this procedure does "
    "not model";

inline Verdict classify_fiber_count(std::int64_t a, bool minimal_ruled_base,
                                    std::vector<std::string> context) {
  Verdict v;
  v.justification = std::move(context);
  if (a <= 3) {
    v.outcome = Outcome::Rational;
    v.justification.push_back("fiber pencil meets the discriminant in a = " + std::to_string(a) +
                              " <= 3 points: rational by the sufficiency half of the "
                              "Iskovskikh criterion");
    v.justification.push_back(kIskovskikhCaveat);
    return v;
  }
  if (a <= 7) {
    if (minimal_ruled_base) {
      v.outcome = Outcome::UnirationalNotRational;
      v.justification.push_back("3 < a = " + std::to_string(a) +
                                " <= 7: unirational via the degree-11 pencil construction");
      v.justification.push_back("not rational: Shokurov's solution of the Iskovskikh "
                                "criterion over minimal ruled bases rules out a > 3");
    } else {
      v.outcome = Outcome::Unirational;
      v.justification.push_back("3 < a = " + std::to_string(a) +
                                " <= 7 over F_1: unirational via the degree-11 pencil "
                                "construction; non-rationality is not concluded for bundles "
                                "obtained from a plane base");
    }
    return v;
  }
  v.outcome = Outcome::Unknown;
  v.justification.push_back("a = " + std::to_string(a) +
                            " > 7 exceeds the unirationality bound; no criterion applies");
  return v;
}

}  // namespace detail

inline Verdict classify(const ConicBundleInput& input) {
  input.validate();
  if (!input.is_standard) {
    Verdict v;
    v.outcome = Outcome::Unknown;
    v.justification.push_back("the bundle is not standard; every criterion here assumes a "
                              "standard conic bundle");
    return v;
  }

  if (const auto* hb = std::get_if<HirzebruchBase>(&input.base)) {
    std::vector<std::string> ctx = {"base F_" + std::to_string(hb->e) + ", discriminant ~ " +
                                    std::to_string(hb->a) + " C0 + " + std::to_string(hb->b) +
                                    " F"};
    if (input.delta_connected.has_value() && !*input.delta_connected)
      ctx.push_back("note: the discriminant is declared disconnected; the Iskovskikh "
                    "criterion is stated for connected discriminants");
    return detail::classify_fiber_count(hb->a, /*minimal_ruled_base=*/true, std::move(ctx));
  }

  const auto& pb = std::get<PlaneBase>(input.base);
  const std::int64_t D = pb.delta_degree;
  if (D == 0) {
    Verdict v;
    v.outcome = Outcome::Rational;
    v.justification.push_back("base the plane with empty discriminant: every fiber is smooth "
                              "and the bundle is rational");
    v.justification.push_back(detail::kIskovskikhCaveat);
    return v;
  }

  std::int64_t m = 1;  // a smooth point of the discriminant always exists
  for (std::int64_t sm : pb.singular_mults) m = std::max(m, std::min<std::int64_t>(sm, 2));
  const auto [a, b] = sarkisov_blowup(D, m);
  std::vector<std::string> ctx = {
      "base the plane, discriminant of degree " + std::to_string(D),
      "blow up a point of multiplicity " + std::to_string(m) +
          " on the discriminant: bundle over F_1 with discriminant ~ " + std::to_string(a) +
          " C0 + " + std::to_string(b) + " F"};
  return detail::classify_fiber_count(a, /*minimal_ruled_base=*/false, std::move(ctx));
}

}  // namespace rcb
