#pragma once

// Builders and numeric invariants for the fat-point linear systems the
// calculus tracks: virtual dimension, arithmetic genus, the no-two-points-
// collinear-with-p0 condition, and generality predicates for explicit
// configurations.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "rcb/modp.hpp"
#include "rcb/points.hpp"
#include "rcb/systems.hpp"

namespace rcb {

// The family -aK + dF on F_e or one of its blow-ups, with multiplicity 2a
// at the X-labels and a at the Y-labels.
inline LinearSystemSpec build_R_class(const SurfaceModel& s, std::int64_t a, std::int64_t d,
                                      const std::vector<PointLabel>& X,
                                      const std::vector<PointLabel>& Y) {
  if (s.base() != BaseKind::Hirzebruch)
    throw ValidationError("R-class systems live on F_e or a blow-up of F_e");
  if (a < 0) throw ValidationError("R-class parameter a must be non-negative");
  for (const auto& x : X) {
    if (std::find(Y.begin(), Y.end(), x) != Y.end())
      throw ValidationError("X and Y overlap at label '" + x + "'");
  }
  DivisorClass k = canonical_class(s);
  std::vector<std::int64_t> f(s.rank(), 0);
  f[1] = 1;
  DivisorClass cls = k.scaled(checked_neg(a)) + DivisorClass(s, f).scaled(d);
  LinearSystemSpec sys{cls, {}};
  for (const auto& x : X) {
    if (!s.has_mark(x)) throw ValidationError("X-label '" + x + "' is not marked on the surface");
    if (s.mark_on_c0(x)) throw ValidationError("X-label '" + x + "' lies on C0");
    sys.mults[x] = checked_mul(2, a);
  }
  for (const auto& y : Y) {
    if (!s.has_mark(y)) throw ValidationError("Y-label '" + y + "' is not marked on the surface");
    if (s.mark_on_c0(y)) throw ValidationError("Y-label '" + y + "' lies on C0");
    sys.mults[y] = a;
  }
  return sys;
}

// Plane counterpart: degree-d curves with a (d-2a)-fold point at p0 and
// a-fold points along A.
inline PlaneSystem build_plane_R_class(const std::vector<PointLabel>& A, std::int64_t a,
                                       std::int64_t d) {
  if (a < 0) throw ValidationError("parameter a must be non-negative");
  if (d < checked_mul(2, a))
    throw ValidationError("plane R-class needs d >= 2a (p0 multiplicity d-2a)");
  PlaneSystem ps;
  ps.degree = d;
  ps.p0 = checked_sub(d, checked_mul(2, a));
  for (const auto& l : A) {
    if (ps.mults.count(l)) throw ValidationError("duplicate label '" + l + "'");
    ps.mults[l] = a;
  }
  ps.validate();
  return ps;
}

// Virtual dimension d(d+3)/2 - sum m(m+1)/2. May be negative; emptiness
// and speciality judgments belong to the interpolation oracle.
inline std::int64_t expected_dim(const PlaneSystem& sys) {
  const std::int64_t d = sys.degree;
  std::int64_t dim = checked_mul(d, checked_add(d, 3)) / 2;
  auto cost = [](std::int64_t m) { return checked_mul(m, checked_add(m, 1)) / 2; };
  dim = checked_sub(dim, cost(sys.p0));
  for (const auto& [l, m] : sys.mults) {
    (void)l;
    dim = checked_sub(dim, cost(m));
  }
  return dim;
}

// Arithmetic genus (d-1)(d-2)/2 - sum m(m-1)/2.
inline std::int64_t genus(const PlaneSystem& sys) {
  const std::int64_t d = sys.degree;
  std::int64_t g = checked_mul(checked_sub(d, 1), checked_sub(d, 2)) / 2;
  auto cost = [](std::int64_t m) { return checked_mul(m, checked_sub(m, 1)) / 2; };
  g = checked_sub(g, cost(sys.p0));
  for (const auto& [l, m] : sys.mults) {
    (void)l;
    g = checked_sub(g, cost(m));
  }
  return g;
}

// True iff no two distinct configured points are collinear with p0.
inline bool check_dagger(const PointConfig& pc) {
  pc.validate();
  if (!pc.coords) throw ValidationError("condition check needs explicit coordinates");
  const auto& pts = *pc.coords;
  const ProjPoint p0 = p0_point();
  for (const auto& q : pts) {
    if (q == p0) throw ValidationError("a configured point coincides with p0");
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      if (collinear(p0, pts[i], pts[j], pc.modulus)) return false;
    }
  }
  return true;
}

struct GeneralityReport {
  bool three_collinear = false;
  bool six_on_conic = false;
  // Only meaningful for 8-point configurations: do the points impose
  // independent conditions on cubics?
  std::optional<bool> cubics_independent;

  bool all_clear() const {
    return !three_collinear && !six_on_conic && cubics_independent.value_or(true);
  }
};

namespace detail {

inline std::vector<std::uint64_t> conic_row(const ProjPoint& q, std::uint64_t p) {
  const auto m = [&](std::uint64_t a, std::uint64_t b) { return mul_mod(a, b, p); };
  return {m(q.c[0], q.c[0]), m(q.c[0], q.c[1]), m(q.c[1], q.c[1]),
          m(q.c[0], q.c[2]), m(q.c[1], q.c[2]), m(q.c[2], q.c[2])};
}

inline std::vector<std::uint64_t> cubic_row(const ProjPoint& q, std::uint64_t p) {
  std::vector<std::uint64_t> row;
  row.reserve(10);
  for (int a = 3; a >= 0; --a) {
    for (int b = 3 - a; b >= 0; --b) {
      const int c = 3 - a - b;
      std::uint64_t v = 1;
      for (int i = 0; i < a; ++i) v = mul_mod(v, q.c[0], p);
      for (int i = 0; i < b; ++i) v = mul_mod(v, q.c[1], p);
      for (int i = 0; i < c; ++i) v = mul_mod(v, q.c[2], p);
      row.push_back(v);
    }
  }
  return row;
}

}  // namespace detail

// Degeneracy scan over an explicit configuration: some 3 points collinear,
// some 6 on a conic, and (for exactly 8 points) dependence of the cubic
// conditions.
inline GeneralityReport generality_report(const PointConfig& pc) {
  pc.validate();
  if (!pc.coords) throw ValidationError("generality report needs explicit coordinates");
  const auto& pts = *pc.coords;
  const std::uint64_t p = pc.modulus;
  GeneralityReport rep;

  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n && !rep.three_collinear; ++i)
    for (std::size_t j = i + 1; j < n && !rep.three_collinear; ++j)
      for (std::size_t k = j + 1; k < n; ++k)
        if (collinear(pts[i], pts[j], pts[k], p)) {
          rep.three_collinear = true;
          break;
        }

  if (n >= 6) {
    std::vector<std::size_t> idx(6);
    // enumerate 6-subsets
    std::vector<bool> sel(n, false);
    std::fill(sel.begin(), sel.begin() + 6, true);
    do {
      std::vector<std::vector<std::uint64_t>> m;
      for (std::size_t i = 0; i < n; ++i)
        if (sel[i]) m.push_back(detail::conic_row(pts[i], p));
      if (det_mod_p(m, p) == 0) {
        rep.six_on_conic = true;
        break;
      }
    } while (std::prev_permutation(sel.begin(), sel.end()));
  }

  if (n == 8) {
    std::vector<std::vector<std::uint64_t>> m;
    for (const auto& q : pts) m.push_back(detail::cubic_row(q, p));
    rep.cubics_independent = rank_mod_p(m, p) == 8;
  }
  return rep;
}

}  // namespace rcb
