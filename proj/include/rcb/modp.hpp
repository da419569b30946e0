#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "rcb/errors.hpp"

namespace rcb {

// Default coefficient field for exact geometry: the largest prime below 2^31.
inline constexpr std::uint64_t kDefaultModulus = 2147483647ULL;

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  return s >= p ? s - p : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return a >= b ? a - b : a + p - b;
}

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mul_mod(r, a, p);
    a = mul_mod(a, a, p);
    e >>= 1;
  }
  return r;
}

inline std::uint64_t inv_mod(std::uint64_t a, std::uint64_t p) {
  a %= p;
  if (a == 0) throw ValidationError("attempt to invert 0 mod p");
  return pow_mod(a, p - 2, p);  // p is prime throughout the library
}

// Deterministic Miller-Rabin for 64-bit inputs (fixed witness set).
inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % q == 0) return n == q;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = pow_mod(a % n, d, n);
    if (x == 0 || x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

// Seeded generator with an explicit reduction step. std::mt19937_64 has a
// standard-mandated output sequence, and avoiding std distributions keeps
// sampled points identical across standard libraries.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw ValidationError("SeededRng::below(0)");
    return eng_() % n;
  }

 private:
  std::mt19937_64 eng_;
};

// Dense Gaussian elimination over F_p. Row count and width are tiny here
// (interpolation matrices for degree <= ~12), so no pivoting strategy
// beyond first-nonzero is needed.
inline std::size_t rank_mod_p(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p) {
  if (m.empty()) return 0;
  const std::size_t rows = m.size();
  const std::size_t cols = m[0].size();
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && m[pivot][col] % p == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(m[pivot], m[rank]);
    const std::uint64_t inv = inv_mod(m[rank][col], p);
    for (std::size_t j = col; j < cols; ++j) m[rank][j] = mul_mod(m[rank][j], inv, p);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == rank) continue;
      const std::uint64_t f = m[i][col] % p;
      if (f == 0) continue;
      for (std::size_t j = col; j < cols; ++j) {
        m[i][j] = sub_mod(m[i][j] % p, mul_mod(f, m[rank][j], p), p);
      }
    }
    ++rank;
  }
  return rank;
}

inline std::uint64_t det_mod_p(std::vector<std::vector<std::uint64_t>> m, std::uint64_t p) {
  const std::size_t n = m.size();
  std::uint64_t det = 1 % p;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] % p == 0) ++pivot;
    if (pivot == n) return 0;
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = sub_mod(0, det, p);
    }
    det = mul_mod(det, m[col][col] % p, p);
    const std::uint64_t inv = inv_mod(m[col][col], p);
    for (std::size_t i = col + 1; i < n; ++i) {
      const std::uint64_t f = mul_mod(m[i][col] % p, inv, p);
      if (f == 0) continue;
      for (std::size_t j = col; j < n; ++j) {
        m[i][j] = sub_mod(m[i][j] % p, mul_mod(f, m[col][j], p), p);
      }
    }
  }
  return det;
}

}  // namespace rcb
