#pragma once

// Truncated power series in q over the integers or over Z/M.
//
// A Series always carries its truncation order N: coefficients of q^0..q^N
// are known, everything above is unknown. Binary operations truncate to the
// smaller order of their operands.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qbip/error.hpp"

namespace qbip {

/// Coefficient ring: the integers (modulus 0) or Z/M for M >= 2.
class CoeffRing {
 public:
  constexpr CoeffRing() = default;

  static constexpr CoeffRing integers() { return CoeffRing(); }
  static CoeffRing modulo(std::uint64_t m);

  constexpr std::uint64_t modulus() const { return modulus_; }
  constexpr bool exact() const { return modulus_ == 0; }

  std::string to_string() const;

  friend constexpr bool operator==(CoeffRing a, CoeffRing b) { return a.modulus_ == b.modulus_; }

 private:
  std::uint64_t modulus_ = 0;
};

struct Mismatch {
  std::size_t index = 0;
  mpz_class lhs;
  mpz_class rhs;
};

class Series {
 public:
  static Series zero(CoeffRing ring, std::size_t order);
  static Series one(CoeffRing ring, std::size_t order);
  static Series constant(CoeffRing ring, std::size_t order, const mpz_class& c);
  /// c * q^exponent, which is the zero series when exponent > order.
  static Series monomial(CoeffRing ring, std::size_t order, std::size_t exponent,
                         const mpz_class& c = 1);
  /// Order is coeffs.size() - 1; values are reduced into the ring.
  static Series from_integers(CoeffRing ring, std::span<const std::int64_t> coeffs);
  static Series from_integers(CoeffRing ring, std::span<const mpz_class> coeffs);
  static Series from_residues(CoeffRing ring, std::vector<std::uint64_t> residues);

  CoeffRing ring() const { return ring_; }
  std::size_t order() const { return order_; }

  /// Coefficient of q^n as an integer (the canonical residue in [0, M) for Z/M).
  mpz_class coeff(std::size_t n) const;
  bool is_zero_at(std::size_t n) const;
  bool is_zero() const;
  std::size_t count_nonzero() const;

  const std::vector<mpz_class>& integer_coeffs() const;
  const std::vector<std::uint64_t>& residues() const;

  Series truncate(std::size_t order) const;

 private:
  Series(CoeffRing ring, std::size_t order);

  CoeffRing ring_;
  std::size_t order_ = 0;
  std::vector<mpz_class> z_;
  std::vector<std::uint64_t> r_;

  friend class SeriesAccess;
};

Series add(const Series& a, const Series& b);
Series sub(const Series& a, const Series& b);
Series neg(const Series& a);
Series scalar_mul(const Series& a, const mpz_class& c);
Series mul(const Series& a, const Series& b);
/// Negative exponents require a unit constant term.
Series pow(const Series& a, std::int64_t e);
Series invert(const Series& a);
/// Multiply by q^t, keeping the order.
Series shift(const Series& a, std::size_t t);

/// Replace q by q^k; the result has order a.order() * k.
Series dilate(const Series& a, std::size_t k);
/// Coefficient n of the result is a's coefficient of q^(s*n + r).
Series extract(const Series& a, std::size_t r, std::size_t s);
/// Keep the terms whose exponent is r mod s and divide by q^r, without
/// relabelling q^s as q. The result has order a.order() - r.
Series select_residue(const Series& a, std::size_t r, std::size_t s);

Series reduce_mod(const Series& a, std::uint64_t m);

/// First index n <= order where a and b differ, or nullopt when they agree.
std::optional<Mismatch> first_mismatch(const Series& a, const Series& b, std::size_t order);
inline std::optional<Mismatch> first_mismatch(const Series& a, const Series& b) {
  return first_mismatch(a, b, std::min(a.order(), b.order()));
}

inline Series operator+(const Series& a, const Series& b) { return add(a, b); }
inline Series operator-(const Series& a, const Series& b) { return sub(a, b); }
inline Series operator*(const Series& a, const Series& b) { return mul(a, b); }

/// Residue of c in Z/m, m >= 2.
std::uint64_t to_residue(const mpz_class& c, std::uint64_t m);
std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
/// Inverse of a modulo m, or nullopt when gcd(a, m) != 1.
std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m);

std::string to_string(const Series& s, std::size_t max_terms = 12);

}  // namespace qbip
