#pragma once

// Registry of q-series identities and replayable proof chains.
//
// An IdentityCase claims lhs = rhs (exactly, or modulo M) as truncated
// series. A ProofChain starts from a generating function and applies
// substitute / extract / relabel / reduce steps, checking each asserted
// intermediate form against the running series.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbip/qexpr.hpp"
#include "qbip/series.hpp"

namespace qbip {

/// Exact checks at orders above this run modulo several 62-bit primes.
inline constexpr std::size_t kExactOrderLimit = 600;

struct IdentityCase {
  std::string id;
  /// Display label; need not be unique.
  std::string label;
  /// Group the identity belongs to, e.g. "2-dissections".
  std::string section;
  Expr lhs;
  Expr rhs;
  /// 0 for an exact identity, otherwise the modulus.
  std::uint64_t modulus = 0;
  std::size_t default_order = 500;
  /// Mismatches are reported as erratum candidates rather than failures.
  bool erratum_watch = false;
  std::string note;

  /// FNV-1a over the serialized sides and modulus, as 16 hex digits.
  std::string content_hash() const;
};

enum class Status { pass, mismatch, fail, erratum_candidate, error, skipped, refuted };

std::string to_string(Status s);
/// Failures make a run exit nonzero; skips, refutations and erratum candidates do not.
bool is_failure(Status s);

struct IdentityResult {
  std::string id;
  Status status = Status::pass;
  std::size_t order = 0;
  std::uint64_t modulus = 0;
  /// Primes used when an exact identity was checked by residues.
  std::vector<std::uint64_t> primes;
  std::optional<Mismatch> first_mismatch;
  /// Prime in which the mismatch was seen (0 when exact or modular).
  std::uint64_t mismatch_prime = 0;
  std::string message;
  double runtime_ms = 0;
};

/// Evaluates both sides to `order` (0 means the case's default order).
IdentityResult verify(const IdentityCase& c, std::size_t order = 0);

/// Deterministic 62-bit primes for residue checks.
std::vector<std::uint64_t> check_primes(std::size_t count);

struct ProofStep {
  enum class Kind { substitute, extract, dilate_back, reduce_mod, assert_equals, combine, recall };

  Kind kind = Kind::assert_equals;
  /// Identity id for substitute; stage label for assert_equals and recall.
  std::string ref;
  std::size_t r = 0;
  std::size_t s = 1;
  std::uint64_t modulus = 0;
  Expr expr;
  std::vector<std::pair<std::int64_t, std::string>> terms;
  bool erratum_watch = false;

  static ProofStep substitute(std::string identity_id);
  /// Keep exponents = r (mod s) and divide by q^r; q^s is not relabelled.
  static ProofStep extract(std::size_t r, std::size_t s);
  /// Replace q^s by q.
  static ProofStep dilate_back(std::size_t s);
  static ProofStep reduce(std::uint64_t m);
  static ProofStep assert_equals(std::string label, Expr e, bool erratum_watch = false);
  /// Current series := sum of coefficient * stored stage.
  static ProofStep combine(std::vector<std::pair<std::int64_t, std::string>> terms);
  /// Current series := a stored stage.
  static ProofStep recall(std::string label);

  std::string describe() const;
};

struct ProofChain {
  std::string id;
  std::string title;
  /// Statements whose proof this chain replays.
  std::vector<std::string> proves;
  Expr start;
  /// Ring the start is evaluated in (0 = exact).
  std::uint64_t start_modulus = 0;
  std::vector<ProofStep> steps;
  std::size_t default_order = 500;
};

struct StageResult {
  std::string label;
  std::string step;
  Status status = Status::pass;
  /// Coefficients actually compared, i.e. the stage's truncation order / spacing + 1.
  std::size_t surviving = 0;
  std::size_t order = 0;
  std::optional<Mismatch> first_mismatch;
  std::string message;
};

struct ChainResult {
  std::string id;
  Status status = Status::pass;
  std::size_t order = 0;
  std::vector<StageResult> stages;
  std::string message;
  double runtime_ms = 0;

  std::size_t asserted() const;
  std::size_t min_surviving() const;
};

/// Minimum coefficients an extraction must leave before replay gives up.
inline constexpr std::size_t kMinSurviving = 32;

class Registry;

/// Replays the chain at truncation order `order` (0 means the chain's
/// default). Substitute steps resolve identity ids in `registry`.
ChainResult replay(const ProofChain& chain, std::size_t order, const Registry& registry);
ChainResult replay(const ProofChain& chain, std::size_t order = 0);

class Registry {
 public:
  const std::vector<IdentityCase>& identities() const { return identities_; }
  const std::vector<ProofChain>& chains() const { return chains_; }

  /// By id, then by content hash, then by label when the label is unique.
  const IdentityCase& identity(std::string_view key) const;
  /// By id, then by any statement the chain proves.
  const ProofChain& chain(std::string_view key) const;

  void add(IdentityCase c);
  void add(ProofChain c);

  /// One record per line: `id | mode | order | lhs | rhs`, where mode is
  /// `exact` or `mod M`. Blank lines and lines starting with # are ignored.
  void load_file(const std::filesystem::path& file);
  void load_text(std::string_view text, const std::string& origin = "<text>");

 private:
  std::vector<IdentityCase> identities_;
  std::vector<ProofChain> chains_;
};

/// The built-in catalog.
const Registry& builtin_registry();

}  // namespace qbip
