#pragma once

// Partition-counting ground truth: l-regular partitions b_l(n) and
// (l,m)-regular bipartitions B_{l,m}(n), by dynamic programming over parts,
// plus a modular fast path through sparse pentagonal products.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "qbip/series.hpp"

namespace qbip {

enum class TableKind : std::uint32_t { regular = 1, bipartite = 2 };

/// Exact-mode tables stop here.
inline constexpr std::size_t kExactCountCap = 20000;

struct CountTable {
  TableKind kind = TableKind::regular;
  std::int64_t l = 0;
  /// Second regularity parameter; 0 for regular tables.
  std::int64_t m = 0;
  std::size_t max_index = 0;
  CoeffRing ring;
  std::vector<mpz_class> exact;
  std::vector<std::uint64_t> residues;

  std::size_t size() const { return max_index + 1; }
  mpz_class at(std::size_t n) const;
  /// Residue of entry n modulo p; p must divide the table's modulus when the table is modular.
  std::uint64_t residue(std::size_t n, std::uint64_t p) const;
  std::string describe() const;
};

/// Partitions of 0..N with no part divisible by l (l >= 2).
CountTable regular_counts(std::int64_t l, std::size_t max_index, CoeffRing ring);
/// Bipartitions (lambda, mu) with lambda l-regular and mu m-regular.
CountTable bipartition_counts(std::int64_t l, std::int64_t m, std::size_t max_index, CoeffRing ring);

/// Coefficients of f_l f_m / f_1^2 mod p, p < 2^32, in O(N sqrt N).
CountTable coeff_fast(std::int64_t l, std::int64_t m, std::size_t max_index, std::uint64_t p);
/// Coefficients of f_l / f_1 mod p, p < 2^32.
CountTable regular_fast(std::int64_t l, std::size_t max_index, std::uint64_t p);

/// Binary table files: "QBCT", version, kind, l, m, N, modulus, then N+1
/// little-endian 64-bit residues. Only modular tables are cached.
void write_table(const CountTable& t, const std::filesystem::path& file);
CountTable read_table(const std::filesystem::path& file);

/// Directory-backed cache keyed by (kind, l, m, modulus). A cached table
/// with a larger N is truncated on load.
class TableCache {
 public:
  explicit TableCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// $QBIP_CACHE_DIR if set, otherwise nullopt.
  static std::optional<std::filesystem::path> from_env();

  std::optional<CountTable> load(TableKind kind, std::int64_t l, std::int64_t m, std::size_t max_index,
                                 std::uint64_t modulus) const;
  void store(const CountTable& t) const;
  std::filesystem::path file_for(TableKind kind, std::int64_t l, std::int64_t m, std::uint64_t modulus) const;

 private:
  std::filesystem::path dir_;
};

/// Modular fast-path table, consulting the cache first when one is given.
CountTable fast_table(TableKind kind, std::int64_t l, std::int64_t m, std::size_t max_index, std::uint64_t p,
                      const TableCache* cache);

}  // namespace qbip
