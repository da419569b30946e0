#pragma once

// Ground truth for dimension counts: the actual projective dimension of a
// fat-point linear system at explicit points, by exact rank of the
// interpolation-conditions matrix over a prime field. General position is
// realized by seeded random sampling; dimensions are aggregated by minimum
// over seeds, since general position minimizes the dimension.

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "rcb/linsys.hpp"
#include "rcb/modp.hpp"
#include "rcb/points.hpp"
#include "rcb/systems.hpp"

namespace rcb {

struct InterpolationProblem {
  std::int64_t degree = 0;
  std::vector<std::pair<ProjPoint, std::int64_t>> conditions;
  std::uint64_t modulus = kDefaultModulus;
  std::uint64_t seed = 0;  // provenance only; the computation is seed-free

  void validate() const {
    if (degree < 0) throw ValidationError("interpolation degree must be non-negative");
    if (!is_prime_u64(modulus)) throw ValidationError("interpolation modulus must be prime");
    if (modulus <= static_cast<std::uint64_t>(degree))
      throw ValidationError("modulus must exceed the degree for derivative conditions");
    for (std::size_t i = 0; i < conditions.size(); ++i) {
      if (conditions[i].second < 1)
        throw ValidationError("interpolation multiplicities must be at least 1");
      for (std::size_t j = i + 1; j < conditions.size(); ++j) {
        if (conditions[i].first == conditions[j].first)
          throw ValidationError("interpolation points must be distinct");
      }
    }
  }
};

namespace detail {

// Monomial exponents of degree d in 3 variables, in a fixed order.
inline std::vector<std::array<int, 3>> monomials(std::int64_t d) {
  std::vector<std::array<int, 3>> out;
  for (int a = static_cast<int>(d); a >= 0; --a)
    for (int b = static_cast<int>(d) - a; b >= 0; --b)
      out.push_back({a, b, static_cast<int>(d) - a - b});
  return out;
}

inline std::uint64_t falling_factorial_mod(int n, int k, std::uint64_t p) {
  std::uint64_t v = 1;
  for (int i = 0; i < k; ++i) v = mul_mod(v, static_cast<std::uint64_t>(n - i) % p, p);
  return v;
}

// Rows for "multiplicity >= m at q": all partial derivatives of order < m
// of the dehomogenized form vanish. Dehomogenization happens in the affine
// chart of q's largest coordinate (largest canonical representative, lowest
// index on ties), which always contains q.
inline void append_condition_rows(std::vector<std::vector<std::uint64_t>>& rows,
                                  const std::vector<std::array<int, 3>>& mons,
                                  const ProjPoint& q, std::int64_t m, std::uint64_t p) {
  std::size_t chart = 0;
  for (std::size_t i = 1; i < 3; ++i)
    if (q.c[i] > q.c[chart]) chart = i;
  const std::size_t u = chart == 0 ? 1 : 0;
  const std::size_t v = chart == 2 ? 1 : 2;
  const std::uint64_t scale = inv_mod(q.c[chart], p);
  const std::uint64_t qu = mul_mod(q.c[u], scale, p);
  const std::uint64_t qv = mul_mod(q.c[v], scale, p);

  for (int r = 0; r < m; ++r) {
    for (int s = 0; s + r < m; ++s) {
      std::vector<std::uint64_t> row;
      row.reserve(mons.size());
      for (const auto& mon : mons) {
        const int au = mon[u];
        const int av = mon[v];
        if (au < r || av < s) {
          row.push_back(0);
          continue;
        }
        std::uint64_t val = falling_factorial_mod(au, r, p);
        val = mul_mod(val, falling_factorial_mod(av, s, p), p);
        val = mul_mod(val, pow_mod(qu, static_cast<std::uint64_t>(au - r), p), p);
        val = mul_mod(val, pow_mod(qv, static_cast<std::uint64_t>(av - s), p), p);
        row.push_back(val);
      }
      rows.push_back(std::move(row));
    }
  }
}

}  // namespace detail

// Projective dimension of the system of degree-d curves satisfying the
// fat-point conditions: N - 1 - rank, with N = (d+1)(d+2)/2. Returns -1
// for empty systems.
inline std::int64_t actual_dim(const InterpolationProblem& prob) {
  prob.validate();
  const auto mons = detail::monomials(prob.degree);
  const std::int64_t n_coeffs = static_cast<std::int64_t>(mons.size());
  std::vector<std::vector<std::uint64_t>> rows;
  for (const auto& [q, m] : prob.conditions)
    detail::append_condition_rows(rows, mons, q, m, prob.modulus);
  const std::int64_t rank = static_cast<std::int64_t>(rank_mod_p(std::move(rows), prob.modulus));
  return n_coeffs - 1 - rank;
}

// n distinct labeled points, deterministic per seed, none equal to p0, with
// all generality flags clear and no two collinear with p0. Resamples a
// bounded number of times if a random draw is degenerate.
inline PointConfig sample_general_points(std::size_t n, std::uint64_t seed,
                                         std::uint64_t modulus = kDefaultModulus) {
  if (!is_prime_u64(modulus)) throw ValidationError("sampling modulus must be prime");
  SeededRng rng(seed);
  constexpr int kMaxAttempts = 64;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    PointConfig pc;
    pc.modulus = modulus;
    std::vector<ProjPoint> pts;
    bool ok = true;
    for (std::size_t i = 0; i < n; ++i) {
      // Affine points [x, y, 1]: never p0, and the chart is uniform.
      ProjPoint q = make_point(rng.below(modulus), rng.below(modulus), 1, modulus);
      if (std::find(pts.begin(), pts.end(), q) != pts.end()) {
        ok = false;
        break;
      }
      pts.push_back(q);
      pc.labels.push_back("q" + std::to_string(i + 1));
    }
    if (!ok) continue;
    pc.coords = std::move(pts);
    if (n >= 2 && !check_dagger(pc)) continue;
    if (n >= 3 && !generality_report(pc).all_clear()) continue;
    return pc;
  }
  throw Error("exhausted the retry budget while sampling general points");
}

struct OracleReport {
  std::int64_t expected = 0;
  std::vector<std::int64_t> per_seed;
  std::int64_t actual = 0;  // minimum over seeds
  bool agree = false;
  bool special = false;  // actual exceeds expected for every seed
  std::vector<std::uint64_t> seeds;
  std::uint64_t modulus = kDefaultModulus;
};

// Realize the plane system at random points, seed by seed, and compare the
// oracle's dimension with the virtual count.
inline OracleReport verify_expected(const PlaneSystem& sys,
                                    const std::vector<std::uint64_t>& seeds,
                                    std::uint64_t modulus = kDefaultModulus) {
  sys.validate();
  if (seeds.empty()) throw ValidationError("verify_expected needs at least one seed");
  OracleReport rep;
  rep.seeds = seeds;
  rep.modulus = modulus;
  rep.expected = expected_dim(sys);

  std::vector<std::int64_t> pt_mults;
  for (const auto& [l, m] : sys.mults) {
    (void)l;
    if (m >= 1) pt_mults.push_back(m);
  }

  for (std::uint64_t seed : seeds) {
    PointConfig pc = sample_general_points(pt_mults.size(), seed, modulus);
    InterpolationProblem prob;
    prob.degree = sys.degree;
    prob.modulus = modulus;
    prob.seed = seed;
    if (sys.p0 >= 1) prob.conditions.emplace_back(p0_point(), sys.p0);
    for (std::size_t i = 0; i < pt_mults.size(); ++i)
      prob.conditions.emplace_back((*pc.coords)[i], pt_mults[i]);
    rep.per_seed.push_back(actual_dim(prob));
  }
  rep.actual = *std::min_element(rep.per_seed.begin(), rep.per_seed.end());
  const std::int64_t expected_eff = std::max<std::int64_t>(rep.expected, -1);
  rep.agree = rep.actual == expected_eff;
  rep.special = rep.actual > expected_eff;
  return rep;
}

}  // namespace rcb
