#include "qbip/oracle.hpp"

#include <array>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace qbip {

namespace {

void check_regularity(std::int64_t l, const char* what) {
  if (l < 2) throw Error(Errc::invalid_argument, std::string(what) + " must be at least 2");
}

void check_exact_cap(CoeffRing ring, std::size_t max_index) {
  if (ring.exact() && max_index > kExactCountCap) {
    throw Error(Errc::range, "exact counts are capped at index " + std::to_string(kExactCountCap) +
                                 "; give a modulus for index " + std::to_string(max_index));
  }
}

std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return a >= m - b ? a - (m - b) : a + b;
}

// Exponents k(3k-1)/2, k(3k+1)/2 for k = 1, 2, ... up to n, in increasing order.
std::vector<std::size_t> pentagonal_exponents(std::size_t n) {
  std::vector<std::size_t> out;
  for (std::size_t k = 1;; ++k) {
    const std::size_t e1 = k * (3 * k - 1) / 2;
    if (e1 > n) break;
    out.push_back(e1);
    const std::size_t e2 = k * (3 * k + 1) / 2;
    if (e2 <= n) out.push_back(e2);
  }
  return out;
}

// Signed support of f_k up to n.
std::vector<std::pair<std::size_t, int>> eta_support(std::size_t k, std::size_t n) {
  std::vector<std::pair<std::size_t, int>> out{{0, 1}};
  auto pe = pentagonal_exponents(n / k);
  for (std::size_t i = 0; i < pe.size(); ++i) {
    const std::size_t kk = i / 2 + 1;
    out.emplace_back(pe[i] * k, kk % 2 == 0 ? 1 : -1);
  }
  return out;
}

// g = a / f_1 mod p through the pentagonal recurrence.
std::vector<std::uint32_t> divide_by_f1(const std::vector<std::uint32_t>& a, std::uint32_t p) {
  const std::size_t n = a.size() - 1;
  const auto pe = pentagonal_exponents(n);
  std::vector<std::uint32_t> g(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    std::uint64_t plus = a[i];
    std::uint64_t minus = 0;
    // Exponents come in pairs for k = 1, 2, ...; odd k carries sign -1 in f_1,
    // which enters the recurrence with sign +1.
    std::size_t j = 0;
    const std::size_t cnt = pe.size();
    for (; j + 3 < cnt && pe[j + 3] <= i; j += 4) {
      plus += static_cast<std::uint64_t>(g[i - pe[j]]) + g[i - pe[j + 1]];
      minus += static_cast<std::uint64_t>(g[i - pe[j + 2]]) + g[i - pe[j + 3]];
    }
    for (; j < cnt && pe[j] <= i; ++j) {
      if ((j / 2) % 2 == 0) plus += g[i - pe[j]];
      else minus += g[i - pe[j]];
    }
    g[i] = static_cast<std::uint32_t>((plus % p + p - minus % p) % p);
  }
  return g;
}

std::vector<std::uint32_t> sparse_product_mod(const std::vector<std::vector<std::pair<std::size_t, int>>>& fs,
                                              std::size_t n, std::uint32_t p) {
  // Product of sparse signed series, accumulated as signed 64-bit integers.
  std::vector<std::int64_t> acc(n + 1, 0);
  acc[0] = 1;
  for (std::size_t idx = 0; idx < fs.size(); ++idx) {
    std::vector<std::int64_t> next(n + 1, 0);
    for (std::size_t i = 0; i <= n; ++i) {
      const std::int64_t x = acc[i];
      if (x == 0) continue;
      for (auto [e, s] : fs[idx]) {
        if (i + e > n) break;
        next[i + e] += s * x;
      }
    }
    for (auto& v : next) v %= static_cast<std::int64_t>(p);
    acc.swap(next);
  }
  std::vector<std::uint32_t> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    std::int64_t v = acc[i] % static_cast<std::int64_t>(p);
    out[i] = static_cast<std::uint32_t>(v < 0 ? v + static_cast<std::int64_t>(p) : v);
  }
  return out;
}

CountTable residue_table(TableKind kind, std::int64_t l, std::int64_t m, std::uint64_t p,
                         const std::vector<std::uint32_t>& v) {
  CountTable t;
  t.kind = kind;
  t.l = l;
  t.m = m;
  t.max_index = v.size() - 1;
  t.ring = CoeffRing::modulo(p);
  t.residues.assign(v.begin(), v.end());
  return t;
}

void check_small_prime(std::uint64_t p) {
  if (p < 2 || p >= (1ULL << 32)) throw Error(Errc::invalid_argument, "fast path needs 2 <= p < 2^32");
}

}  // namespace

mpz_class CountTable::at(std::size_t n) const {
  if (n > max_index) throw Error(Errc::range, "index " + std::to_string(n) + " beyond table " + describe());
  if (ring.exact()) return exact[n];
  mpz_class c;
  mpz_set_ui(c.get_mpz_t(), static_cast<unsigned long>(residues[n]));
  return c;
}

std::uint64_t CountTable::residue(std::size_t n, std::uint64_t p) const {
  if (n > max_index) throw Error(Errc::range, "index " + std::to_string(n) + " beyond table " + describe());
  if (ring.exact()) return to_residue(exact[n], p);
  if (ring.modulus() % p != 0) {
    throw Error(Errc::ring_mismatch, std::to_string(p) + " does not divide the table modulus " +
                                         std::to_string(ring.modulus()));
  }
  return residues[n] % p;
}

std::string CountTable::describe() const {
  std::ostringstream os;
  if (kind == TableKind::regular) os << "b_" << l;
  else os << "B_{" << l << "," << m << "}";
  os << "[0.." << max_index << "] " << ring.to_string();
  return os.str();
}

CountTable regular_counts(std::int64_t l, std::size_t max_index, CoeffRing ring) {
  check_regularity(l, "regularity");
  check_exact_cap(ring, max_index);
  CountTable t;
  t.kind = TableKind::regular;
  t.l = l;
  t.max_index = max_index;
  t.ring = ring;
  const auto ul = static_cast<std::size_t>(l);
  if (ring.exact()) {
    t.exact.assign(max_index + 1, 0);
    t.exact[0] = 1;
    for (std::size_t part = 1; part <= max_index; ++part) {
      if (part % ul == 0) continue;
      for (std::size_t i = part; i <= max_index; ++i) t.exact[i] += t.exact[i - part];
    }
  } else {
    const auto m = ring.modulus();
    t.residues.assign(max_index + 1, 0);
    t.residues[0] = 1 % m;
    for (std::size_t part = 1; part <= max_index; ++part) {
      if (part % ul == 0) continue;
      for (std::size_t i = part; i <= max_index; ++i) {
        t.residues[i] = add_mod(t.residues[i], t.residues[i - part], m);
      }
    }
  }
  return t;
}

CountTable bipartition_counts(std::int64_t l, std::int64_t m, std::size_t max_index, CoeffRing ring) {
  check_regularity(l, "l");
  check_regularity(m, "m");
  check_exact_cap(ring, max_index);
  const CountTable a = regular_counts(l, max_index, ring);
  const CountTable b = l == m ? a : regular_counts(m, max_index, ring);
  CountTable t;
  t.kind = TableKind::bipartite;
  t.l = l;
  t.m = m;
  t.max_index = max_index;
  t.ring = ring;
  if (ring.exact()) {
    t.exact.assign(max_index + 1, 0);
    for (std::size_t n = 0; n <= max_index; ++n) {
      for (std::size_t j = 0; j <= n; ++j) {
        mpz_addmul(t.exact[n].get_mpz_t(), a.exact[j].get_mpz_t(), b.exact[n - j].get_mpz_t());
      }
    }
  } else {
    const auto md = ring.modulus();
    t.residues.assign(max_index + 1, 0);
    for (std::size_t n = 0; n <= max_index; ++n) {
      std::uint64_t s = 0;
      for (std::size_t j = 0; j <= n; ++j) s = add_mod(s, mul_mod(a.residues[j], b.residues[n - j], md), md);
      t.residues[n] = s;
    }
  }
  return t;
}

CountTable coeff_fast(std::int64_t l, std::int64_t m, std::size_t max_index, std::uint64_t p) {
  check_regularity(l, "l");
  check_regularity(m, "m");
  check_small_prime(p);
  const auto p32 = static_cast<std::uint32_t>(p);
  auto num = sparse_product_mod({eta_support(static_cast<std::size_t>(l), max_index),
                                 eta_support(static_cast<std::size_t>(m), max_index)},
                                max_index, p32);
  auto g = divide_by_f1(divide_by_f1(num, p32), p32);
  return residue_table(TableKind::bipartite, l, m, p, g);
}

CountTable regular_fast(std::int64_t l, std::size_t max_index, std::uint64_t p) {
  check_regularity(l, "regularity");
  check_small_prime(p);
  const auto p32 = static_cast<std::uint32_t>(p);
  auto num = sparse_product_mod({eta_support(static_cast<std::size_t>(l), max_index)}, max_index, p32);
  return residue_table(TableKind::regular, l, 0, p, divide_by_f1(num, p32));
}

// ---------------------------------------------------------------------------
// Binary table files

namespace {

constexpr std::array<char, 4> kMagic{'Q', 'B', 'C', 'T'};
constexpr std::uint64_t kFormatVersion = 1;

void put_u64(std::ostream& os, std::uint64_t v) {
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xff);
  os.write(b.data(), 8);
}

std::uint64_t get_u64(std::istream& is) {
  std::array<unsigned char, 8> b{};
  is.read(reinterpret_cast<char*>(b.data()), 8);
  if (!is) throw Error(Errc::io, "truncated table file");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[static_cast<std::size_t>(i)];
  return v;
}

}  // namespace

void write_table(const CountTable& t, const std::filesystem::path& file) {
  if (t.ring.exact()) throw Error(Errc::invalid_argument, "only modular tables can be written");
  auto tmp = file;
  tmp += ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw Error(Errc::io, "cannot write " + tmp.string());
    os.write(kMagic.data(), 4);
    put_u64(os, kFormatVersion);
    put_u64(os, static_cast<std::uint64_t>(t.kind));
    put_u64(os, static_cast<std::uint64_t>(t.l));
    put_u64(os, static_cast<std::uint64_t>(t.m));
    put_u64(os, t.max_index);
    put_u64(os, t.ring.modulus());
    for (auto v : t.residues) put_u64(os, v);
    if (!os) throw Error(Errc::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, file, ec);
  if (ec) throw Error(Errc::io, "cannot rename " + tmp.string() + ": " + ec.message());
}

CountTable read_table(const std::filesystem::path& file) {
  std::ifstream is(file, std::ios::binary);
  if (!is) throw Error(Errc::io, "cannot open " + file.string());
  std::array<char, 4> magic{};
  is.read(magic.data(), 4);
  if (!is || magic != kMagic) throw Error(Errc::io, file.string() + " is not a table file");
  if (get_u64(is) != kFormatVersion) throw Error(Errc::io, file.string() + ": unsupported version");
  CountTable t;
  const auto kind = get_u64(is);
  if (kind != 1 && kind != 2) throw Error(Errc::io, file.string() + ": bad table kind");
  t.kind = static_cast<TableKind>(kind);
  t.l = static_cast<std::int64_t>(get_u64(is));
  t.m = static_cast<std::int64_t>(get_u64(is));
  t.max_index = get_u64(is);
  t.ring = CoeffRing::modulo(get_u64(is));
  t.residues.resize(t.max_index + 1);
  for (auto& v : t.residues) {
    v = get_u64(is);
    if (v >= t.ring.modulus()) throw Error(Errc::io, file.string() + ": residue out of range");
  }
  return t;
}

std::optional<std::filesystem::path> TableCache::from_env() {
  const char* d = std::getenv("QBIP_CACHE_DIR");
  if (d == nullptr || *d == '\0') return std::nullopt;
  return std::filesystem::path(d);
}

std::filesystem::path TableCache::file_for(TableKind kind, std::int64_t l, std::int64_t m,
                                           std::uint64_t modulus) const {
  std::ostringstream os;
  os << (kind == TableKind::regular ? "regular_" : "bipartite_") << l << "_" << m << "_mod" << modulus
     << ".qbct";
  return dir_ / os.str();
}

std::optional<CountTable> TableCache::load(TableKind kind, std::int64_t l, std::int64_t m,
                                           std::size_t max_index, std::uint64_t modulus) const {
  auto file = file_for(kind, l, m, modulus);
  std::error_code ec;
  if (!std::filesystem::exists(file, ec)) return std::nullopt;
  CountTable t;
  try {
    t = read_table(file);
  } catch (const Error&) {
    return std::nullopt;
  }
  if (t.kind != kind || t.l != l || t.m != m || t.ring.modulus() != modulus || t.max_index < max_index) {
    return std::nullopt;
  }
  t.residues.resize(max_index + 1);
  t.max_index = max_index;
  return t;
}

void TableCache::store(const CountTable& t) const {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw Error(Errc::io, "cannot create cache directory " + dir_.string());
  auto file = file_for(t.kind, t.l, t.m, t.ring.modulus());
  // Keep a larger table that is already there.
  if (auto old = load(t.kind, t.l, t.m, t.max_index, t.ring.modulus()); old) return;
  write_table(t, file);
}

CountTable fast_table(TableKind kind, std::int64_t l, std::int64_t m, std::size_t max_index, std::uint64_t p,
                      const TableCache* cache) {
  if (cache != nullptr) {
    if (auto t = cache->load(kind, l, m, max_index, p)) return *t;
  }
  CountTable t = kind == TableKind::regular ? regular_fast(l, max_index, p) : coeff_fast(l, m, max_index, p);
  if (cache != nullptr) {
    try {
      cache->store(t);
    } catch (const Error&) {
      // A read-only cache directory only costs recomputation.
    }
  }
  return t;
}

}  // namespace qbip
