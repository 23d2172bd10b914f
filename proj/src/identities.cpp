#include "qbip/identities.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>

namespace qbip {

namespace {

double elapsed_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mul_mod(r, b, m);
    b = mul_mod(b, b, m);
    e >>= 1;
  }
  return r;
}

// Deterministic for all 64-bit inputs with these bases.
bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    std::uint64_t x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

bool supported_on_multiples(const Series& a, std::size_t s) {
  for (std::size_t i = 0; i <= a.order(); ++i) {
    if (i % s != 0 && !a.is_zero_at(i)) return false;
  }
  return true;
}

}  // namespace

std::string IdentityCase::content_hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char ch : s) {
      h ^= ch;
      h *= 1099511628211ULL;
    }
  };
  feed(lhs.key());
  feed("=");
  feed(rhs.key());
  feed("|");
  feed(std::to_string(modulus));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::pass: return "pass";
    case Status::mismatch: return "mismatch";
    case Status::fail: return "fail";
    case Status::erratum_candidate: return "erratum-candidate";
    case Status::error: return "error";
    case Status::skipped: return "skipped";
    case Status::refuted: return "refuted";
  }
  return "unknown";
}

bool is_failure(Status s) { return s == Status::mismatch || s == Status::fail || s == Status::error; }

std::vector<std::uint64_t> check_primes(std::size_t count) {
  std::mt19937_64 rng(0x71b1ca5eULL);
  std::vector<std::uint64_t> out;
  while (out.size() < count) {
    std::uint64_t c = (rng() >> 2) | (1ULL << 61) | 1ULL;
    if (is_prime(c)) out.push_back(c);
  }
  return out;
}

IdentityResult verify(const IdentityCase& c, std::size_t order) {
  const auto t0 = std::chrono::steady_clock::now();
  IdentityResult r;
  r.id = c.id;
  r.order = order ? order : c.default_order;
  r.modulus = c.modulus;
  const Status bad = c.erratum_watch ? Status::erratum_candidate : Status::mismatch;
  try {
    auto check = [&](CoeffRing ring) {
      Evaluator ev(ring);
      auto lhs = ev(c.lhs, r.order);
      auto rhs = ev(c.rhs, r.order);
      return first_mismatch(lhs, rhs, r.order);
    };
    if (c.modulus != 0) {
      r.first_mismatch = check(CoeffRing::modulo(c.modulus));
    } else if (r.order <= kExactOrderLimit) {
      r.first_mismatch = check(CoeffRing::integers());
    } else {
      r.primes = check_primes(3);
      for (auto p : r.primes) {
        auto mm = check(CoeffRing::modulo(p));
        if (mm && (!r.first_mismatch || mm->index < r.first_mismatch->index)) {
          r.first_mismatch = mm;
          r.mismatch_prime = p;
        }
      }
    }
    if (r.first_mismatch) {
      r.status = bad;
      r.message = "sides differ at q^" + std::to_string(r.first_mismatch->index);
    }
  } catch (const Error& e) {
    r.status = Status::error;
    r.message = e.what();
  }
  r.runtime_ms = elapsed_ms(t0);
  return r;
}

ProofStep ProofStep::substitute(std::string identity_id) {
  ProofStep s;
  s.kind = Kind::substitute;
  s.ref = std::move(identity_id);
  return s;
}

ProofStep ProofStep::extract(std::size_t r, std::size_t s) {
  if (s == 0 || r >= s) throw Error(Errc::invalid_argument, "extract step: need 0 <= r < s");
  ProofStep p;
  p.kind = Kind::extract;
  p.r = r;
  p.s = s;
  return p;
}

ProofStep ProofStep::dilate_back(std::size_t s) {
  if (s == 0) throw Error(Errc::invalid_argument, "dilate-back step: factor must be positive");
  ProofStep p;
  p.kind = Kind::dilate_back;
  p.s = s;
  return p;
}

ProofStep ProofStep::reduce(std::uint64_t m) {
  if (m < 2) throw Error(Errc::invalid_argument, "reduce step: modulus must be at least 2");
  ProofStep p;
  p.kind = Kind::reduce_mod;
  p.modulus = m;
  return p;
}

ProofStep ProofStep::assert_equals(std::string label, Expr e, bool erratum_watch) {
  ProofStep p;
  p.kind = Kind::assert_equals;
  p.ref = std::move(label);
  p.expr = std::move(e);
  p.erratum_watch = erratum_watch;
  return p;
}

ProofStep ProofStep::combine(std::vector<std::pair<std::int64_t, std::string>> terms) {
  if (terms.empty()) throw Error(Errc::invalid_argument, "combine step: no terms");
  ProofStep p;
  p.kind = Kind::combine;
  p.terms = std::move(terms);
  return p;
}

ProofStep ProofStep::recall(std::string label) {
  ProofStep p;
  p.kind = Kind::recall;
  p.ref = std::move(label);
  return p;
}

std::string ProofStep::describe() const {
  switch (kind) {
    case Kind::substitute: return "substitute " + ref;
    case Kind::extract: return "extract q^(" + std::to_string(s) + "n+" + std::to_string(r) + ")";
    case Kind::dilate_back: return "q^" + std::to_string(s) + " -> q";
    case Kind::reduce_mod: return "reduce mod " + std::to_string(modulus);
    case Kind::assert_equals: return "assert " + ref;
    case Kind::recall: return "recall " + ref;
    case Kind::combine: {
      std::string out = "combine";
      for (const auto& [c, l] : terms) out += " " + std::to_string(c) + "*[" + l + "]";
      return out;
    }
  }
  return "?";
}

std::size_t ChainResult::asserted() const {
  std::size_t n = 0;
  for (const auto& s : stages) n += s.step.rfind("assert", 0) == 0;
  return n;
}

std::size_t ChainResult::min_surviving() const {
  std::size_t m = 0;
  bool any = false;
  for (const auto& s : stages) {
    if (s.step.rfind("assert", 0) != 0) continue;
    m = any ? std::min(m, s.surviving) : s.surviving;
    any = true;
  }
  return m;
}

namespace {

struct Stored {
  Series series;
  std::size_t spacing;
};

// One pass of the chain in a fixed ring. `lazy_reduce` means the ring already
// is the modulus of the leading reduce step.
ChainResult replay_in(const ProofChain& chain, std::size_t order, CoeffRing ring, bool lazy_reduce,
                      const Registry& registry) {
  ChainResult out;
  out.id = chain.id;
  out.order = order;
  auto ev = std::make_unique<Evaluator>(ring);
  Series cur = (*ev)(chain.start, order);
  std::size_t spacing = 1;
  std::map<std::string, Stored> stored;
  stored.emplace("start", Stored{cur, 1});

  auto surviving = [&] { return cur.order() / spacing + 1; };
  auto require_precision = [&](const ProofStep& st) {
    if (surviving() < kMinSurviving) {
      throw Error(Errc::precision, st.describe() + " leaves " + std::to_string(surviving()) +
                                       " coefficients; raise the order");
    }
  };
  auto lookup = [&](const std::string& label) -> const Stored& {
    auto it = stored.find(label);
    if (it == stored.end()) throw Error(Errc::not_found, "no stored stage " + label);
    return it->second;
  };

  for (std::size_t i = 0; i < chain.steps.size(); ++i) {
    const ProofStep& st = chain.steps[i];
    StageResult sr;
    sr.step = st.describe();
    sr.label = st.kind == ProofStep::Kind::assert_equals ? st.ref : sr.step;
    switch (st.kind) {
      case ProofStep::Kind::substitute: {
        const IdentityCase& id = registry.identity(st.ref);
        if (id.modulus != 0 && (ring.exact() || ring.modulus() % id.modulus != 0)) {
          throw Error(Errc::ring_mismatch, "identity " + id.id + " holds only mod " + std::to_string(id.modulus));
        }
        Series l = (*ev)(id.lhs, cur.order());
        Series r = (*ev)(id.rhs, cur.order());
        if (id.modulus != 0) {
          l = reduce_mod(l, id.modulus);
          r = reduce_mod(r, id.modulus);
        }
        sr.order = cur.order();
        sr.first_mismatch = first_mismatch(l, r);
        if (sr.first_mismatch) {
          sr.status = id.erratum_watch ? Status::erratum_candidate : Status::mismatch;
          sr.message = "substituted identity fails in " + ring.to_string();
        }
        break;
      }
      case ProofStep::Kind::extract:
        cur = select_residue(cur, st.r, st.s);
        spacing = st.s;
        require_precision(st);
        break;
      case ProofStep::Kind::dilate_back:
        if (!supported_on_multiples(cur, st.s)) {
          sr.status = Status::mismatch;
          sr.message = "series has terms off multiples of q^" + std::to_string(st.s);
        }
        cur = extract(cur, 0, st.s);
        spacing = spacing % st.s == 0 ? spacing / st.s : 1;
        require_precision(st);
        break;
      case ProofStep::Kind::reduce_mod:
        if (ring.exact()) {
          cur = reduce_mod(cur, st.modulus);
          ring = CoeffRing::modulo(st.modulus);
          ev = std::make_unique<Evaluator>(ring);
        } else if (!(lazy_reduce && i == 0 && ring.modulus() == st.modulus)) {
          throw Error(Errc::ring_mismatch, "cannot reduce " + ring.to_string() + " mod " +
                                               std::to_string(st.modulus));
        }
        break;
      case ProofStep::Kind::assert_equals: {
        Series full = (*ev)(st.expr, order);
        sr.order = cur.order();
        sr.surviving = surviving();
        sr.first_mismatch = first_mismatch(cur, full, cur.order());
        if (sr.first_mismatch) {
          sr.status = st.erratum_watch ? Status::erratum_candidate : Status::mismatch;
          sr.message = "stage differs at q^" + std::to_string(sr.first_mismatch->index);
        }
        cur = full;
        stored.insert_or_assign(st.ref, Stored{cur, spacing});
        break;
      }
      case ProofStep::Kind::combine: {
        std::optional<Series> acc;
        std::size_t g = 0;
        for (const auto& [c, label] : st.terms) {
          const Stored& s = lookup(label);
          Series term = scalar_mul(s.series, c);
          acc = acc ? add(*acc, term) : term;
          g = std::gcd(g, s.spacing);
        }
        cur = *acc;
        spacing = g;
        break;
      }
      case ProofStep::Kind::recall: {
        const Stored& s = lookup(st.ref);
        cur = s.series;
        spacing = s.spacing;
        break;
      }
    }
    out.stages.push_back(std::move(sr));
  }
  return out;
}

ChainResult merge(std::vector<ChainResult> runs) {
  ChainResult out = std::move(runs.front());
  for (std::size_t k = 1; k < runs.size(); ++k) {
    for (std::size_t i = 0; i < out.stages.size() && i < runs[k].stages.size(); ++i) {
      auto& a = out.stages[i];
      const auto& b = runs[k].stages[i];
      if (a.status == Status::pass && b.status != Status::pass) a = b;
    }
  }
  return out;
}

}  // namespace

ChainResult replay(const ProofChain& chain, std::size_t order, const Registry& registry) {
  const auto t0 = std::chrono::steady_clock::now();
  if (order == 0) order = chain.default_order;
  ChainResult out;
  try {
    const bool has_reduce = std::any_of(chain.steps.begin(), chain.steps.end(), [](const ProofStep& s) {
      return s.kind == ProofStep::Kind::reduce_mod;
    });
    if (chain.start_modulus != 0) {
      out = replay_in(chain, order, CoeffRing::modulo(chain.start_modulus), false, registry);
    } else if (order <= kExactOrderLimit) {
      out = replay_in(chain, order, CoeffRing::integers(), false, registry);
    } else if (!chain.steps.empty() && chain.steps.front().kind == ProofStep::Kind::reduce_mod) {
      out = replay_in(chain, order, CoeffRing::modulo(chain.steps.front().modulus), true, registry);
    } else if (!has_reduce) {
      std::vector<ChainResult> runs;
      for (auto p : check_primes(3)) runs.push_back(replay_in(chain, order, CoeffRing::modulo(p), false, registry));
      out = merge(std::move(runs));
    } else {
      out = replay_in(chain, order, CoeffRing::integers(), false, registry);
    }
    for (const auto& s : out.stages) {
      if (s.status == Status::mismatch) out.status = Status::mismatch;
      if (s.status == Status::erratum_candidate && out.status == Status::pass) out.status = Status::erratum_candidate;
    }
  } catch (const Error& e) {
    out.id = chain.id;
    out.order = order;
    out.status = Status::error;
    out.message = e.what();
  }
  out.runtime_ms = elapsed_ms(t0);
  return out;
}

ChainResult replay(const ProofChain& chain, std::size_t order) { return replay(chain, order, builtin_registry()); }

const IdentityCase& Registry::identity(std::string_view key) const {
  for (const auto& c : identities_) {
    if (c.id == key) return c;
  }
  for (const auto& c : identities_) {
    if (c.content_hash() == key) return c;
  }
  const IdentityCase* hit = nullptr;
  std::size_t hits = 0;
  for (const auto& c : identities_) {
    if (c.label == key) {
      hit = &c;
      ++hits;
    }
  }
  if (hits == 1) return *hit;
  if (hits > 1) throw Error(Errc::not_found, "label '" + std::string(key) + "' is ambiguous; use the id or hash");
  throw Error(Errc::not_found, "no identity '" + std::string(key) + "'");
}

const ProofChain& Registry::chain(std::string_view key) const {
  for (const auto& c : chains_) {
    if (c.id == key) return c;
  }
  for (const auto& c : chains_) {
    for (const auto& p : c.proves) {
      if (p == key) return c;
    }
  }
  throw Error(Errc::not_found, "no chain '" + std::string(key) + "'");
}

void Registry::add(IdentityCase c) {
  for (const auto& x : identities_) {
    if (x.id == c.id) throw Error(Errc::invalid_argument, "duplicate identity id " + c.id);
  }
  identities_.push_back(std::move(c));
}

void Registry::add(ProofChain c) {
  for (const auto& x : chains_) {
    if (x.id == c.id) throw Error(Errc::invalid_argument, "duplicate chain id " + c.id);
  }
  chains_.push_back(std::move(c));
}

void Registry::load_text(std::string_view text, const std::string& origin) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> f;
    std::size_t pos = 0;
    while (true) {
      auto bar = t.find('|', pos);
      f.push_back(trim(std::string_view(t).substr(pos, bar == std::string::npos ? std::string::npos : bar - pos)));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
    const std::string where = origin + ":" + std::to_string(lineno) + ": ";
    if (f.size() != 5) throw Error(Errc::parse, where + "expected 5 fields separated by |");
    IdentityCase c;
    c.id = f[0];
    c.label = f[0];
    c.section = origin;
    if (c.id.empty()) throw Error(Errc::parse, where + "empty id");
    if (f[1] == "exact") {
      c.modulus = 0;
    } else if (f[1].rfind("mod", 0) == 0) {
      try {
        c.modulus = std::stoull(trim(f[1].substr(3)));
      } catch (const std::exception&) {
        throw Error(Errc::parse, where + "bad modulus '" + f[1] + "'");
      }
      if (c.modulus < 2) throw Error(Errc::parse, where + "modulus must be at least 2");
    } else {
      throw Error(Errc::parse, where + "mode must be 'exact' or 'mod M'");
    }
    if (f[2] != "-") {
      try {
        c.default_order = std::stoull(f[2]);
      } catch (const std::exception&) {
        throw Error(Errc::parse, where + "bad order '" + f[2] + "'");
      }
    }
    try {
      c.lhs = parse_expr(f[3]);
      c.rhs = parse_expr(f[4]);
    } catch (const Error& e) {
      throw Error(e.code(), where + e.what());
    }
    add(std::move(c));
  }
}

void Registry::load_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(Errc::io, "cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  load_text(ss.str(), file.filename().string());
}

}  // namespace qbip
