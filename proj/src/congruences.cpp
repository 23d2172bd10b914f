#include "qbip/congruences.hpp"

#include <chrono>

namespace qbip {

namespace {

using Mat = std::array<std::uint64_t, 4>;

Mat mat_mul(const Mat& a, const Mat& b, std::uint64_t p) {
  auto add = [p](std::uint64_t x, std::uint64_t y) { return x >= p - y ? x - (p - y) : x + y; };
  return {add(mul_mod(a[0], b[0], p), mul_mod(a[1], b[2], p)), add(mul_mod(a[0], b[1], p), mul_mod(a[1], b[3], p)),
          add(mul_mod(a[2], b[0], p), mul_mod(a[3], b[2], p)), add(mul_mod(a[2], b[1], p), mul_mod(a[3], b[3], p))};
}

std::uint64_t res(std::int64_t v, std::uint64_t p) { return to_residue(mpz_class(static_cast<long>(v)), p); }

constexpr std::size_t kKeptViolations = 10;

}  // namespace

std::uint64_t seq_eval(const RecurrenceSeq& s, std::uint64_t k, std::uint64_t p) {
  if (p < 2) throw Error(Errc::invalid_argument, "seq_eval: modulus must be at least 2");
  if (k == 0) return res(s.s0, p);
  // (s_k, s_{k-1}) = M^(k-1) (s_1, s_0) with M = [[alpha, beta], [1, 0]].
  Mat m{res(s.alpha, p), res(s.beta, p), 1 % p, 0};
  Mat r{1 % p, 0, 0, 1 % p};
  for (std::uint64_t e = k - 1; e; e >>= 1) {
    if (e & 1) r = mat_mul(r, m, p);
    m = mat_mul(m, m, p);
  }
  const std::uint64_t a = mul_mod(r[0], res(s.s1, p), p);
  const std::uint64_t b = mul_mod(r[1], res(s.s0, p), p);
  return a >= p - b ? a - (p - b) : a + b;
}

mpz_class seq_exact(const RecurrenceSeq& s, std::uint64_t k) {
  mpz_class prev = static_cast<long>(s.s0);
  mpz_class cur = static_cast<long>(s.s1);
  if (k == 0) return prev;
  for (std::uint64_t i = 1; i < k; ++i) {
    mpz_class next = static_cast<long>(s.alpha) * cur + static_cast<long>(s.beta) * prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

const std::vector<RecurrenceSeq>& builtin_sequences() {
  static const std::vector<RecurrenceSeq> seqs = {
      {"E", 6, 5, 0, 1}, {"e", 6, 5, 1, 0}, {"A", 1, 7, 0, 1}, {"a", 1, 7, 1, 0},
      {"C", 8, 1, 0, 1}, {"c", 8, 1, 1, 0}, {"D", 2, 4, 0, 1}, {"d", 2, 4, 1, 0},
  };
  return seqs;
}

const RecurrenceSeq& sequence(std::string_view name) {
  for (const auto& s : builtin_sequences()) {
    if (s.name == name) return s;
  }
  throw Error(Errc::not_found, "no sequence '" + std::string(name) + "'");
}

std::string Source::name() const {
  if (kind == TableKind::regular) return "b_" + std::to_string(l);
  return "B_{" + std::to_string(l) + "," + std::to_string(m) + "}";
}

std::string AffineIndex::describe() const {
  std::string out = scale == 1 ? "n" : scale.get_str() + "n";
  if (offset != 0) out += "+" + offset.get_str();
  return out;
}

AffineIndex affine(const mpz_class& scale, const mpz_class& num, const mpz_class& den) {
  if (den == 0 || num % den != 0) {
    throw Error(Errc::invalid_argument, "index offset " + num.get_str() + "/" + den.get_str() + " is not an integer");
  }
  AffineIndex a{scale, num / den};
  if (a.scale <= 0 || a.offset < 0) throw Error(Errc::invalid_argument, "index map must be increasing and nonnegative");
  return a;
}

std::string Instance::param_text() const {
  std::string out;
  for (const auto& [k, v] : params) {
    if (!out.empty()) out += ",";
    out += k + "=" + std::to_string(v);
  }
  return out;
}

mpz_class Instance::max_index(std::size_t n) const {
  mpz_class m = lhs.index.at(n);
  for (const auto& t : rhs) m = std::max(m, mpz_class(t.index.at(n)));
  return m;
}

std::size_t FamilyReport::checked() const {
  std::size_t c = 0;
  for (const auto& i : instances) c += i.checked;
  return c;
}

std::size_t FamilyReport::violation_count() const {
  std::size_t c = 0;
  for (const auto& i : instances) c += i.violation_count;
  return c;
}

TableProvider::TableProvider(std::optional<std::filesystem::path> cache_dir) {
  if (cache_dir) cache_.emplace(*cache_dir);
}

void TableProvider::reserve(const Source& s, std::uint64_t p, std::size_t max_index) {
  std::lock_guard lock(mu_);
  auto& e = entries_[{s, p}];
  e.reserved = std::max(e.reserved, max_index);
}

std::shared_ptr<const CountTable> TableProvider::get(const Source& s, std::uint64_t p, std::size_t max_index) {
  std::promise<Ptr> promise;
  std::shared_future<Ptr> fut;
  std::size_t size = 0;
  bool build = false;
  {
    std::lock_guard lock(mu_);
    auto& e = entries_[{s, p}];
    e.reserved = std::max(e.reserved, max_index);
    if (e.table.valid() && e.size >= max_index) {
      fut = e.table;
    } else {
      build = true;
      size = e.reserved;
      e.size = size;
      e.table = promise.get_future().share();
      fut = e.table;
      ++builds_;
    }
  }
  if (build) {
    try {
      const TableCache* cache = cache_ ? &*cache_ : nullptr;
      promise.set_value(std::make_shared<const CountTable>(fast_table(s.kind, s.l, s.m, size, p, cache)));
    } catch (...) {
      promise.set_exception(std::current_exception());
    }
  }
  return fut.get();
}

std::size_t TableProvider::builds() const {
  std::lock_guard lock(mu_);
  return builds_;
}

void reserve_tables(const CongruenceFamily& f, TableProvider& tables, std::size_t n_max) {
  for (const auto& inst : f.instances) {
    const std::size_t n = n_max ? n_max : inst.n_max;
    if (inst.max_index(n) > kDeskScale) continue;
    tables.reserve(inst.lhs.source, f.p, inst.lhs.index.at(n).get_ui());
    for (const auto& t : inst.rhs) tables.reserve(t.source, f.p, t.index.at(n).get_ui());
  }
}

FamilyReport verify_family(const CongruenceFamily& f, TableProvider& tables, std::size_t n_max) {
  const auto t0 = std::chrono::steady_clock::now();
  FamilyReport rep;
  rep.id = f.id;
  rep.reading = f.reading;
  rep.p = f.p;
  const Status bad = f.reading.empty() ? Status::fail : Status::refuted;
  std::map<std::pair<Source, std::uint64_t>, std::size_t> used;
  bool any_checked = false;

  for (const auto& inst : f.instances) {
    InstanceReport ir;
    ir.params = inst.param_text();
    ir.n_max = n_max ? n_max : inst.n_max;
    ir.max_index = inst.max_index(ir.n_max);
    ir.message = inst.note;
    if (ir.max_index > kDeskScale) {
      // Smallest index this instance would need beyond the bound.
      mpz_class first = inst.lhs.index.at(0);
      for (std::size_t n = 0; n <= ir.n_max; ++n) {
        first = inst.max_index(n);
        if (first > kDeskScale) break;
      }
      ir.status = Status::skipped;
      std::string why = "index exceeds desk scale " + std::to_string(kDeskScale) + ": needs index " + first.get_str();
      ir.message = ir.message.empty() ? why : why + "; " + ir.message;
      rep.instances.push_back(std::move(ir));
      continue;
    }
    auto table_for = [&](const Term& t) {
      const std::size_t top = t.index.at(ir.n_max).get_ui();
      auto tab = tables.get(t.source, f.p, top);
      auto& u = used[{t.source, f.p}];
      u = std::max(u, top);
      return tab;
    };
    auto lt = table_for(inst.lhs);
    std::vector<std::shared_ptr<const CountTable>> rts;
    for (const auto& t : inst.rhs) rts.push_back(table_for(t));

    const std::uint64_t p = f.p;
    auto value = [p](const Term& t, const CountTable& tab, std::size_t n) {
      return mul_mod(t.coef % p, tab.residue(t.index.at(n).get_ui(), p), p);
    };
    for (std::size_t n = 0; n <= ir.n_max; ++n) {
      const std::uint64_t got = value(inst.lhs, *lt, n);
      std::uint64_t want = 0;
      for (std::size_t j = 0; j < inst.rhs.size(); ++j) want = (want + value(inst.rhs[j], *rts[j], n)) % p;
      ++ir.checked;
      if (got != want) {
        ++ir.violation_count;
        if (ir.violations.size() < kKeptViolations) ir.violations.push_back({n, inst.lhs.index.at(n), got, want});
      }
    }
    any_checked = true;
    if (ir.violation_count) {
      ir.status = bad;
      rep.status = bad;
    }
    rep.instances.push_back(std::move(ir));
  }
  if (!any_checked && rep.status == Status::pass) rep.status = Status::skipped;
  for (const auto& [key, top] : used) {
    rep.sources.push_back(key.first.name() + " mod " + std::to_string(key.second) + " to index " + std::to_string(top));
  }
  rep.runtime_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

FamilyReport verify_three_term(const std::string& id, std::uint64_t p, const Source& source, const AffineIndex& lhs,
                               const std::array<AffineIndex, 2>& refs, const std::array<std::uint64_t, 2>& coeffs,
                               std::size_t n_max, TableProvider& tables) {
  CongruenceFamily f;
  f.id = id;
  f.p = p;
  Instance inst;
  inst.lhs = {1, source, lhs};
  inst.rhs = {{coeffs[0], source, refs[0]}, {coeffs[1], source, refs[1]}};
  inst.n_max = n_max;
  f.instances.push_back(std::move(inst));
  return verify_family(f, tables);
}

std::vector<const CongruenceFamily*> find_families(std::string_view key) {
  std::vector<const CongruenceFamily*> out;
  for (const auto& f : builtin_families()) {
    if (f.id == key) return {&f};
  }
  for (const auto& f : builtin_families()) {
    if (f.id.size() > key.size() && f.id.compare(0, key.size(), key) == 0 && f.id[key.size()] == '-') {
      out.push_back(&f);
    }
  }
  return out;
}

}  // namespace qbip
