#pragma once

// Brute-force references shared by the test binaries. Nothing here calls the
// library's series arithmetic.

#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include <gmpxx.h>

#include "qbip/series.hpp"

namespace qbip::test {

inline constexpr std::uint64_t kSeed = 20241017;

/// Generalized pentagonal numbers k(3k-1)/2, k in Z, up to n, with sign (-1)^k.
inline std::vector<std::pair<std::size_t, int>> pentagonal(std::size_t n) {
  std::vector<std::pair<std::size_t, int>> out;
  out.emplace_back(0, 1);
  for (std::int64_t k = 1;; ++k) {
    bool any = false;
    for (std::int64_t s : {k, -k}) {
      auto e = static_cast<std::size_t>(s * (3 * s - 1) / 2);
      if (e > n) continue;
      out.emplace_back(e, (k % 2 == 0) ? 1 : -1);
      any = true;
    }
    if (!any) break;
  }
  return out;
}

/// Coefficients of f_k up to n from the pentagonal number theorem.
inline std::vector<mpz_class> eta_by_pentagonal(std::size_t k, std::size_t n) {
  std::vector<mpz_class> c(n + 1, 0);
  for (auto [e, s] : pentagonal(n / k)) c[e * k] += s;
  return c;
}

/// Number of partitions of 0..n whose parts lie in `allowed` (bounded-parts DP).
inline std::vector<mpz_class> count_partitions(std::size_t n, const std::vector<std::size_t>& allowed,
                                               bool distinct = false) {
  std::vector<mpz_class> c(n + 1, 0);
  c[0] = 1;
  for (std::size_t p : allowed) {
    if (p == 0 || p > n) continue;
    if (distinct) {
      for (std::size_t i = n; i >= p; --i) {
        c[i] += c[i - p];
        if (i == p) break;
      }
    } else {
      for (std::size_t i = p; i <= n; ++i) c[i] += c[i - p];
    }
  }
  return c;
}

/// Schoolbook product of two integer vectors truncated at n.
inline std::vector<mpz_class> naive_mul(const std::vector<mpz_class>& a, const std::vector<mpz_class>& b,
                                        std::size_t n) {
  std::vector<mpz_class> c(n + 1, 0);
  for (std::size_t i = 0; i <= n && i < a.size(); ++i) {
    for (std::size_t j = 0; i + j <= n && j < b.size(); ++j) c[i + j] += a[i] * b[j];
  }
  return c;
}

inline Series random_series(std::mt19937_64& rng, CoeffRing ring, std::size_t order, bool unit = false,
                            int density_pct = 60) {
  std::uniform_int_distribution<int> val(-50, 50);
  std::uniform_int_distribution<int> pct(0, 99);
  std::vector<mpz_class> c(order + 1, 0);
  for (auto& x : c) {
    if (pct(rng) < density_pct) x = val(rng);
  }
  if (unit) c[0] = (pct(rng) < 50) ? 1 : -1;
  return Series::from_integers(ring, std::span<const mpz_class>(c));
}

inline std::vector<mpz_class> coeffs(const Series& s) {
  std::vector<mpz_class> out;
  for (std::size_t i = 0; i <= s.order(); ++i) out.push_back(s.coeff(i));
  return out;
}

}  // namespace qbip::test
