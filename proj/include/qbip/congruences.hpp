#pragma once

// Arithmetic-progression congruences for B_{l,m}(n) and b_l(n), checked
// coefficient by coefficient against oracle tables, and the order-2 linear
// recurrences that supply their constants.

#include <array>
#include <cstdint>
#include <filesystem>
#include <future>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "qbip/identities.hpp"
#include "qbip/oracle.hpp"

namespace qbip {

/// s_{k+1} = alpha s_k + beta s_{k-1}.
struct RecurrenceSeq {
  std::string name;
  std::int64_t alpha = 0;
  std::int64_t beta = 0;
  std::int64_t s0 = 0;
  std::int64_t s1 = 0;
};

/// s_k mod p by 2x2 matrix powering.
std::uint64_t seq_eval(const RecurrenceSeq& s, std::uint64_t k, std::uint64_t p);
mpz_class seq_exact(const RecurrenceSeq& s, std::uint64_t k);

/// E, e (mod 7), A, a (mod 11), C, c (mod 13), D, d (mod 17).
const std::vector<RecurrenceSeq>& builtin_sequences();
const RecurrenceSeq& sequence(std::string_view name);

/// Family instances whose largest index exceeds this are skipped.
inline constexpr std::size_t kDeskScale = 30'000'000;

/// Where coefficients come from: B_{l,m} (bipartite) or b_l (regular, m = 0).
struct Source {
  TableKind kind = TableKind::bipartite;
  std::int64_t l = 0;
  std::int64_t m = 0;

  static Source bipartite(std::int64_t l, std::int64_t m) { return {TableKind::bipartite, l, m}; }
  static Source regular(std::int64_t l) { return {TableKind::regular, l, 0}; }
  std::string name() const;
  friend bool operator<(const Source& a, const Source& b) {
    return std::tie(a.kind, a.l, a.m) < std::tie(b.kind, b.l, b.m);
  }
  friend bool operator==(const Source& a, const Source& b) = default;
};

/// n -> scale * n + offset.
struct AffineIndex {
  mpz_class scale = 1;
  mpz_class offset = 0;

  mpz_class at(std::size_t n) const { return scale * n + offset; }
  std::string describe() const;
};

/// scale * n + num / den; throws invalid_argument unless den divides num.
AffineIndex affine(const mpz_class& scale, const mpz_class& num, const mpz_class& den = 1);

/// coef * source(index(n)).
struct Term {
  std::uint64_t coef = 1;
  Source source;
  AffineIndex index;
};

/// lhs(n) = sum of rhs(n) mod p for n = 0..n_max; an empty rhs means lhs = 0.
struct Instance {
  std::vector<std::pair<std::string, std::int64_t>> params;
  Term lhs;
  std::vector<Term> rhs;
  std::size_t n_max = 0;
  std::string note;

  std::string param_text() const;
  /// Largest index any term reads at n = n_max.
  mpz_class max_index(std::size_t n_max) const;
};

struct CongruenceFamily {
  std::string id;
  std::string title;
  std::string statement;
  std::uint64_t p = 0;
  /// Set when the printed statement admits several readings; violations of
  /// such a family refute the reading instead of failing the run.
  std::string reading;
  std::vector<Instance> instances;
};

struct Violation {
  std::size_t n = 0;
  mpz_class index;
  std::uint64_t got = 0;
  std::uint64_t expected = 0;
};

struct InstanceReport {
  std::string params;
  Status status = Status::pass;
  std::size_t n_max = 0;
  mpz_class max_index;
  std::size_t checked = 0;
  std::size_t violation_count = 0;
  /// First few violations only.
  std::vector<Violation> violations;
  std::string message;
};

struct FamilyReport {
  std::string id;
  std::string reading;
  std::uint64_t p = 0;
  Status status = Status::pass;
  std::vector<InstanceReport> instances;
  /// Tables the verdict was read from, e.g. "B_{3,7} mod 7 to 1652053".
  std::vector<std::string> sources;
  double runtime_ms = 0;

  std::size_t checked() const;
  std::size_t violation_count() const;
};

/// Shares modular count tables between concurrent verifications. A table is
/// built once per (source, p) at the largest size requested so far, through
/// the on-disk cache when one is configured.
class TableProvider {
 public:
  explicit TableProvider(std::optional<std::filesystem::path> cache_dir = TableCache::from_env());

  /// Announce a future need so a single build covers it.
  void reserve(const Source& s, std::uint64_t p, std::size_t max_index);
  std::shared_ptr<const CountTable> get(const Source& s, std::uint64_t p, std::size_t max_index);
  std::size_t builds() const;

 private:
  using Ptr = std::shared_ptr<const CountTable>;
  struct Entry {
    std::size_t reserved = 0;
    std::size_t size = 0;
    std::shared_future<Ptr> table;
  };

  std::optional<TableCache> cache_;
  mutable std::mutex mu_;
  std::map<std::pair<Source, std::uint64_t>, Entry> entries_;
  std::size_t builds_ = 0;
};

/// Checks each instance for n = 0..n_max, where a nonzero `n_max` overrides
/// every instance's default range.
FamilyReport verify_family(const CongruenceFamily& f, TableProvider& tables, std::size_t n_max = 0);

/// B(lhs(n)) = c1 B(ref1(n)) + c2 B(ref2(n)) mod p.
FamilyReport verify_three_term(const std::string& id, std::uint64_t p, const Source& source, const AffineIndex& lhs,
                               const std::array<AffineIndex, 2>& refs, const std::array<std::uint64_t, 2>& coeffs,
                               std::size_t n_max, TableProvider& tables);

/// Tables a family needs at the given range override.
void reserve_tables(const CongruenceFamily& f, TableProvider& tables, std::size_t n_max = 0);

const std::vector<CongruenceFamily>& builtin_families();
/// By exact id, or every family whose id starts with `key` followed by '-'.
std::vector<const CongruenceFamily*> find_families(std::string_view key);

}  // namespace qbip
