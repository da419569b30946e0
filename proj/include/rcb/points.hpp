#pragma once

// Labeled point configurations with exact projective coordinates over a
// prime field. Coordinates are optional: the transform machinery works on
// labels alone, the interpolation oracle and the generality predicates
// need actual positions.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "rcb/modp.hpp"
#include "rcb/surface.hpp"

namespace rcb {

struct ProjPoint {
  std::array<std::uint64_t, 3> c{0, 0, 0};

  friend bool operator==(const ProjPoint&, const ProjPoint&) = default;
};

// Reduce mod p and scale so the first nonzero coordinate is 1.
inline ProjPoint make_point(std::uint64_t x, std::uint64_t y, std::uint64_t z, std::uint64_t p) {
  ProjPoint q{{x % p, y % p, z % p}};
  std::size_t lead = 0;
  while (lead < 3 && q.c[lead] == 0) ++lead;
  if (lead == 3) throw ValidationError("projective point with all coordinates zero");
  const std::uint64_t inv = inv_mod(q.c[lead], p);
  for (auto& v : q.c) v = mul_mod(v, inv, p);
  return q;
}

inline ProjPoint p0_point() { return ProjPoint{{1, 0, 0}}; }

enum class PointRole { Generic, XType, YType, P0 };

struct PointConfig {
  std::uint64_t modulus = kDefaultModulus;
  std::vector<PointLabel> labels;
  std::optional<std::vector<ProjPoint>> coords;
  std::vector<PointRole> roles;  // parallel to labels; empty means all Generic

  void validate() const {
    if (!is_prime_u64(modulus)) throw ValidationError("point-config modulus must be prime");
    std::vector<PointLabel> seen;
    for (const auto& l : labels) {
      if (std::find(seen.begin(), seen.end(), l) != seen.end())
        throw ValidationError("duplicate label '" + l + "' in point configuration");
      seen.push_back(l);
    }
    if (coords && coords->size() != labels.size())
      throw ValidationError("point coordinates do not match the label list");
    if (!roles.empty() && roles.size() != labels.size())
      throw ValidationError("point roles do not match the label list");
  }

  std::size_t size() const { return labels.size(); }
};

// det of the 3x3 matrix with the given rows, mod p.
inline std::uint64_t det3(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                          std::uint64_t p) {
  const auto m = [&](std::uint64_t u, std::uint64_t v) { return mul_mod(u, v, p); };
  std::uint64_t t = 0;
  t = add_mod(t, m(a.c[0], sub_mod(m(b.c[1], c.c[2]), m(b.c[2], c.c[1]), p)), p);
  t = sub_mod(t, m(a.c[1], sub_mod(m(b.c[0], c.c[2]), m(b.c[2], c.c[0]), p)), p);
  t = add_mod(t, m(a.c[2], sub_mod(m(b.c[0], c.c[1]), m(b.c[1], c.c[0]), p)), p);
  return t;
}

inline bool collinear(const ProjPoint& a, const ProjPoint& b, const ProjPoint& c,
                      std::uint64_t p) {
  return det3(a, b, c, p) == 0;
}

}  // namespace rcb
