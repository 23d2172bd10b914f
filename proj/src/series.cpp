#include "qbip/series.hpp"

#include <sstream>

namespace qbip {

namespace {

using u128 = unsigned __int128;

constexpr std::uint64_t kSmallModulus = std::uint64_t{1} << 32;

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  std::uint64_t s = a + b;
  return (s >= m || s < a) ? s - m : s;
}

std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= b ? a - b : a + (m - b);
}

void require_same_ring(const Series& a, const Series& b, const char* op) {
  if (!(a.ring() == b.ring())) {
    throw Error(Errc::ring_mismatch, std::string(op) + ": ring mismatch (" + a.ring().to_string() +
                                         " vs " + b.ring().to_string() + ")");
  }
}

std::vector<std::size_t> nonzero_indices(const Series& a, std::size_t upto) {
  std::vector<std::size_t> nz;
  for (std::size_t i = 0; i <= upto; ++i) {
    if (!a.is_zero_at(i)) nz.push_back(i);
  }
  return nz;
}

}  // namespace

// Grants the free functions below access to Series internals.
class SeriesAccess {
 public:
  static Series make(CoeffRing ring, std::size_t order) { return Series(ring, order); }
  static std::vector<mpz_class>& z(Series& s) { return s.z_; }
  static std::vector<std::uint64_t>& r(Series& s) { return s.r_; }
  static const std::vector<mpz_class>& z(const Series& s) { return s.z_; }
  static const std::vector<std::uint64_t>& r(const Series& s) { return s.r_; }
};

using A = SeriesAccess;

CoeffRing CoeffRing::modulo(std::uint64_t m) {
  if (m == 1) throw Error(Errc::invalid_argument, "modulus must be 0 or >= 2");
  CoeffRing r;
  r.modulus_ = m;
  return r;
}

std::string CoeffRing::to_string() const {
  return exact() ? std::string("Z") : "Z/" + std::to_string(modulus_);
}

std::uint64_t to_residue(const mpz_class& c, std::uint64_t m) {
  return mpz_fdiv_ui(c.get_mpz_t(), m);
}

std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::optional<std::uint64_t> inverse_mod(std::uint64_t a, std::uint64_t m) {
  mpz_class inv;
  mpz_class aa(a), mm(m);
  if (mpz_invert(inv.get_mpz_t(), aa.get_mpz_t(), mm.get_mpz_t()) == 0) return std::nullopt;
  return inv.get_ui();
}

Series::Series(CoeffRing ring, std::size_t order) : ring_(ring), order_(order) {
  if (ring.exact()) {
    z_.assign(order + 1, mpz_class(0));
  } else {
    r_.assign(order + 1, 0);
  }
}

Series Series::zero(CoeffRing ring, std::size_t order) { return Series(ring, order); }

Series Series::one(CoeffRing ring, std::size_t order) { return constant(ring, order, 1); }

Series Series::constant(CoeffRing ring, std::size_t order, const mpz_class& c) {
  return monomial(ring, order, 0, c);
}

Series Series::monomial(CoeffRing ring, std::size_t order, std::size_t exponent,
                        const mpz_class& c) {
  Series s(ring, order);
  if (exponent <= order) {
    if (ring.exact()) {
      s.z_[exponent] = c;
    } else {
      s.r_[exponent] = to_residue(c, ring.modulus());
    }
  }
  return s;
}

Series Series::from_integers(CoeffRing ring, std::span<const std::int64_t> coeffs) {
  if (coeffs.empty()) throw Error(Errc::invalid_argument, "series needs at least one coefficient");
  Series s(ring, coeffs.size() - 1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    mpz_class c(static_cast<long>(coeffs[i]));
    if (ring.exact()) {
      s.z_[i] = c;
    } else {
      s.r_[i] = to_residue(c, ring.modulus());
    }
  }
  return s;
}

Series Series::from_integers(CoeffRing ring, std::span<const mpz_class> coeffs) {
  if (coeffs.empty()) throw Error(Errc::invalid_argument, "series needs at least one coefficient");
  Series s(ring, coeffs.size() - 1);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (ring.exact()) {
      s.z_[i] = coeffs[i];
    } else {
      s.r_[i] = to_residue(coeffs[i], ring.modulus());
    }
  }
  return s;
}

Series Series::from_residues(CoeffRing ring, std::vector<std::uint64_t> residues) {
  if (ring.exact()) throw Error(Errc::invalid_argument, "from_residues needs a modular ring");
  if (residues.empty()) throw Error(Errc::invalid_argument, "series needs at least one coefficient");
  for (auto& v : residues) v %= ring.modulus();
  Series s(ring, residues.size() - 1);
  s.r_ = std::move(residues);
  return s;
}

mpz_class Series::coeff(std::size_t n) const {
  if (n > order_) throw Error(Errc::precision, "coefficient index beyond truncation order");
  if (ring_.exact()) return z_[n];
  return mpz_class(static_cast<unsigned long>(r_[n]));
}

bool Series::is_zero_at(std::size_t n) const {
  return ring_.exact() ? sgn(z_[n]) == 0 : r_[n] == 0;
}

bool Series::is_zero() const { return count_nonzero() == 0; }

std::size_t Series::count_nonzero() const {
  std::size_t c = 0;
  for (std::size_t i = 0; i <= order_; ++i) c += is_zero_at(i) ? 0 : 1;
  return c;
}

const std::vector<mpz_class>& Series::integer_coeffs() const {
  if (!ring_.exact()) throw Error(Errc::invalid_argument, "series is not over the integers");
  return z_;
}

const std::vector<std::uint64_t>& Series::residues() const {
  if (ring_.exact()) throw Error(Errc::invalid_argument, "series is not over a residue ring");
  return r_;
}

Series Series::truncate(std::size_t order) const {
  if (order > order_) throw Error(Errc::precision, "cannot truncate to a higher order");
  Series s(ring_, order);
  if (ring_.exact()) {
    std::copy(z_.begin(), z_.begin() + static_cast<std::ptrdiff_t>(order + 1), s.z_.begin());
  } else {
    std::copy(r_.begin(), r_.begin() + static_cast<std::ptrdiff_t>(order + 1), s.r_.begin());
  }
  return s;
}

Series add(const Series& a, const Series& b) {
  require_same_ring(a, b, "add");
  const std::size_t n = std::min(a.order(), b.order());
  Series c = A::make(a.ring(), n);
  if (a.ring().exact()) {
    for (std::size_t i = 0; i <= n; ++i) A::z(c)[i] = A::z(a)[i] + A::z(b)[i];
  } else {
    const auto m = a.ring().modulus();
    for (std::size_t i = 0; i <= n; ++i) A::r(c)[i] = add_mod(A::r(a)[i], A::r(b)[i], m);
  }
  return c;
}

Series sub(const Series& a, const Series& b) {
  require_same_ring(a, b, "sub");
  const std::size_t n = std::min(a.order(), b.order());
  Series c = A::make(a.ring(), n);
  if (a.ring().exact()) {
    for (std::size_t i = 0; i <= n; ++i) A::z(c)[i] = A::z(a)[i] - A::z(b)[i];
  } else {
    const auto m = a.ring().modulus();
    for (std::size_t i = 0; i <= n; ++i) A::r(c)[i] = sub_mod(A::r(a)[i], A::r(b)[i], m);
  }
  return c;
}

Series neg(const Series& a) { return sub(Series::zero(a.ring(), a.order()), a); }

Series scalar_mul(const Series& a, const mpz_class& k) {
  Series c = A::make(a.ring(), a.order());
  if (a.ring().exact()) {
    for (std::size_t i = 0; i <= a.order(); ++i) A::z(c)[i] = A::z(a)[i] * k;
  } else {
    const auto m = a.ring().modulus();
    const auto kr = to_residue(k, m);
    for (std::size_t i = 0; i <= a.order(); ++i) A::r(c)[i] = mul_mod(A::r(a)[i], kr, m);
  }
  return c;
}

Series mul(const Series& a, const Series& b) {
  require_same_ring(a, b, "mul");
  const std::size_t n = std::min(a.order(), b.order());
  auto nza = nonzero_indices(a, n);
  auto nzb = nonzero_indices(b, n);
  const Series* x = &a;
  const Series* y = &b;
  if (nzb.size() < nza.size()) {
    std::swap(x, y);
    std::swap(nza, nzb);
  }
  Series c = A::make(a.ring(), n);
  if (a.ring().exact()) {
    const auto& xz = A::z(*x);
    const auto& yz = A::z(*y);
    auto& cz = A::z(c);
    for (std::size_t i : nza) {
      for (std::size_t j : nzb) {
        if (i + j > n) break;
        mpz_addmul(cz[i + j].get_mpz_t(), xz[i].get_mpz_t(), yz[j].get_mpz_t());
      }
    }
    return c;
  }
  const auto m = a.ring().modulus();
  const auto& xr = A::r(*x);
  const auto& yr = A::r(*y);
  auto& cr = A::r(c);
  if (m <= kSmallModulus) {
    // Products fit in 64 bits; 128-bit accumulators never overflow at desk scale.
    std::vector<u128> acc(n + 1, 0);
    const bool dense_y = nzb.size() * 2 > n;
    for (std::size_t i : nza) {
      const std::uint64_t xi = xr[i];
      if (dense_y) {
        const std::uint64_t* yp = yr.data();
        u128* ap = acc.data() + i;
        for (std::size_t j = 0, lim = n - i; j <= lim; ++j) ap[j] += static_cast<u128>(xi * yp[j]);
      } else {
        for (std::size_t j : nzb) {
          if (i + j > n) break;
          acc[i + j] += static_cast<u128>(xi * yr[j]);
        }
      }
    }
    for (std::size_t k = 0; k <= n; ++k) cr[k] = static_cast<std::uint64_t>(acc[k] % m);
    return c;
  }
  for (std::size_t i : nza) {
    for (std::size_t j : nzb) {
      if (i + j > n) break;
      cr[i + j] = add_mod(cr[i + j], mul_mod(xr[i], yr[j], m), m);
    }
  }
  return c;
}

Series invert(const Series& a) {
  const std::size_t n = a.order();
  Series h = A::make(a.ring(), n);
  auto nz = nonzero_indices(a, n);
  if (a.ring().exact()) {
    const auto& az = A::z(a);
    if (az[0] != 1 && az[0] != -1) {
      throw Error(Errc::not_unit, "invert: constant term must be +1 or -1 over the integers");
    }
    auto& hz = A::z(h);
    const mpz_class a0 = az[0];  // its own inverse
    hz[0] = a0;
    mpz_class s;
    for (std::size_t k = 1; k <= n; ++k) {
      s = 0;
      for (std::size_t j : nz) {
        if (j == 0) continue;
        if (j > k) break;
        mpz_addmul(s.get_mpz_t(), az[j].get_mpz_t(), hz[k - j].get_mpz_t());
      }
      hz[k] = -a0 * s;
    }
    return h;
  }
  const auto m = a.ring().modulus();
  const auto& ar = A::r(a);
  auto inv0 = inverse_mod(ar[0], m);
  if (!inv0) throw Error(Errc::not_unit, "invert: constant term is not a unit in " + a.ring().to_string());
  const std::uint64_t neg_inv0 = (m - *inv0) % m;
  auto& hr = A::r(h);
  hr[0] = *inv0;
  for (std::size_t k = 1; k <= n; ++k) {
    std::uint64_t s = 0;
    if (m <= kSmallModulus) {
      u128 acc = 0;
      for (std::size_t j : nz) {
        if (j == 0) continue;
        if (j > k) break;
        acc += static_cast<u128>(ar[j] * hr[k - j]);
      }
      s = static_cast<std::uint64_t>(acc % m);
    } else {
      for (std::size_t j : nz) {
        if (j == 0) continue;
        if (j > k) break;
        s = add_mod(s, mul_mod(ar[j], hr[k - j], m), m);
      }
    }
    hr[k] = mul_mod(s, neg_inv0, m);
  }
  return h;
}

Series pow(const Series& a, std::int64_t e) {
  if (e < 0) return pow(invert(a), -e);
  if (e == 0) return Series::one(a.ring(), a.order());
  if (e == 1) return a;
  Series result = Series::one(a.ring(), a.order());
  Series base = a;
  bool first = true;
  auto k = static_cast<std::uint64_t>(e);
  while (k > 0) {
    if (k & 1) {
      result = first ? base : mul(result, base);
      first = false;
    }
    k >>= 1;
    if (k > 0) base = mul(base, base);
  }
  return result;
}

Series shift(const Series& a, std::size_t t) {
  Series c = A::make(a.ring(), a.order());
  for (std::size_t i = t; i <= a.order(); ++i) {
    if (a.ring().exact()) {
      A::z(c)[i] = A::z(a)[i - t];
    } else {
      A::r(c)[i] = A::r(a)[i - t];
    }
  }
  return c;
}

Series dilate(const Series& a, std::size_t k) {
  if (k == 0) throw Error(Errc::invalid_argument, "dilate: factor must be positive");
  Series c = A::make(a.ring(), a.order() * k);
  for (std::size_t i = 0; i <= a.order(); ++i) {
    if (a.ring().exact()) {
      A::z(c)[i * k] = A::z(a)[i];
    } else {
      A::r(c)[i * k] = A::r(a)[i];
    }
  }
  return c;
}

Series extract(const Series& a, std::size_t r, std::size_t s) {
  if (s == 0 || r >= s) throw Error(Errc::invalid_argument, "extract: need 0 <= r < s");
  if (r > a.order()) throw Error(Errc::precision, "extract: residue beyond truncation order");
  const std::size_t n = (a.order() - r) / s;
  Series c = A::make(a.ring(), n);
  for (std::size_t i = 0; i <= n; ++i) {
    if (a.ring().exact()) {
      A::z(c)[i] = A::z(a)[s * i + r];
    } else {
      A::r(c)[i] = A::r(a)[s * i + r];
    }
  }
  return c;
}

Series select_residue(const Series& a, std::size_t r, std::size_t s) {
  if (s == 0 || r >= s) throw Error(Errc::invalid_argument, "select_residue: need 0 <= r < s");
  if (r > a.order()) throw Error(Errc::precision, "select_residue: residue beyond truncation order");
  const std::size_t n = a.order() - r;
  Series c = A::make(a.ring(), n);
  for (std::size_t i = 0; i <= n; i += s) {
    if (a.ring().exact()) {
      A::z(c)[i] = A::z(a)[i + r];
    } else {
      A::r(c)[i] = A::r(a)[i + r];
    }
  }
  return c;
}

Series reduce_mod(const Series& a, std::uint64_t m) {
  auto ring = CoeffRing::modulo(m);
  if (!a.ring().exact()) {
    if (a.ring().modulus() % m != 0) {
      throw Error(Errc::ring_mismatch, "reduce_mod: " + std::to_string(m) + " does not divide " +
                                           std::to_string(a.ring().modulus()));
    }
    std::vector<std::uint64_t> v = A::r(a);
    return Series::from_residues(ring, std::move(v));
  }
  Series c = A::make(ring, a.order());
  for (std::size_t i = 0; i <= a.order(); ++i) A::r(c)[i] = to_residue(A::z(a)[i], m);
  return c;
}

std::optional<Mismatch> first_mismatch(const Series& a, const Series& b, std::size_t order) {
  require_same_ring(a, b, "first_mismatch");
  if (order > a.order() || order > b.order()) {
    throw Error(Errc::precision, "first_mismatch: order exceeds an operand's truncation");
  }
  for (std::size_t i = 0; i <= order; ++i) {
    bool differ = a.ring().exact() ? A::z(a)[i] != A::z(b)[i] : A::r(a)[i] != A::r(b)[i];
    if (differ) return Mismatch{i, a.coeff(i), b.coeff(i)};
  }
  return std::nullopt;
}

std::string to_string(const Series& s, std::size_t max_terms) {
  std::ostringstream os;
  std::size_t shown = 0;
  for (std::size_t i = 0; i <= s.order() && shown < max_terms; ++i) {
    if (s.is_zero_at(i)) continue;
    mpz_class c = s.coeff(i);
    if (shown > 0) os << (sgn(c) < 0 ? " - " : " + ");
    else if (sgn(c) < 0) os << "-";
    mpz_class ac = abs(c);
    if (i == 0 || ac != 1) os << ac.get_str();
    if (i > 0) os << "q" << (i > 1 ? "^" + std::to_string(i) : "");
    ++shown;
  }
  if (shown == 0) os << "0";
  os << " + O(q^" << s.order() + 1 << ")";
  if (!s.ring().exact()) os << " mod " << s.ring().modulus();
  return os.str();
}

}  // namespace qbip
