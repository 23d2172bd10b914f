#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>

#include <unistd.h>

#include "qbip/identities.hpp"
#include "qbip/qexpr.hpp"
#include "support.hpp"

using namespace qbip;
using namespace qbip::dsl;

namespace {

// prod f_k^{e_k} up to n from pentagonal expansions and partition counts only.
std::vector<mpz_class> brute_eta_quotient(const std::vector<std::pair<std::size_t, int>>& f, std::size_t n) {
  std::vector<mpz_class> acc(n + 1, 0);
  acc[0] = 1;
  for (auto [k, e] : f) {
    std::vector<mpz_class> base;
    if (e > 0) {
      base = test::eta_by_pentagonal(k, n);
    } else {
      std::vector<std::size_t> parts;
      for (std::size_t p = k; p <= n; p += k) parts.push_back(p);
      base = test::count_partitions(n, parts);
    }
    for (int i = 0; i < std::abs(e); ++i) acc = test::naive_mul(acc, base, n);
  }
  return acc;
}

std::vector<mpz_class> shift_scale(const std::vector<mpz_class>& a, std::size_t by, long c) {
  std::vector<mpz_class> out(a.size(), 0);
  for (std::size_t i = 0; i + by < a.size(); ++i) out[i + by] = c * a[i];
  return out;
}

std::vector<mpz_class> plus(std::vector<mpz_class> a, const std::vector<mpz_class>& b) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

}  // namespace

TEST_CASE("catalog sizes") {
  const auto& reg = builtin_registry();
  CHECK(reg.identities().size() >= 14);
  CHECK(reg.chains().size() == 7);
  CHECK(replay(reg.chain("b3-7-mod7")).asserted() >= 11);
}

TEST_CASE("2-dissection of 1/f1^2 against brute-force products") {
  const std::size_t n = 160;
  auto lhs = brute_eta_quotient({{1, -2}}, n);
  auto rhs = plus(brute_eta_quotient({{8, 5}, {2, -5}, {16, -2}}, n),
                  shift_scale(brute_eta_quotient({{4, 2}, {16, 2}, {2, -5}, {8, -1}}, n), 1, 2));
  CHECK(lhs == rhs);
  const auto& c = builtin_registry().identity("inv-f1-sq");
  CHECK(test::coeffs(eval(c.lhs, CoeffRing::integers(), n)) == lhs);
  CHECK(test::coeffs(eval(c.rhs, CoeffRing::integers(), n)) == rhs);
}

TEST_CASE("2-dissection of f1 f3 against brute-force products") {
  const std::size_t n = 160;
  auto lhs = brute_eta_quotient({{1, 1}, {3, 1}}, n);
  auto rhs = plus(brute_eta_quotient({{2, 1}, {8, 2}, {12, 4}, {4, -2}, {6, -1}, {24, -2}}, n),
                  shift_scale(brute_eta_quotient({{4, 4}, {6, 1}, {24, 2}, {2, -1}, {8, -2}, {12, -2}}, n), 1, -1));
  CHECK(lhs == rhs);
  const auto& c = builtin_registry().identity("f1-f3");
  CHECK(test::coeffs(eval(c.rhs, CoeffRing::integers(), n)) == rhs);
}

TEST_CASE("every built-in identity holds at its default order") {
  for (const auto& c : builtin_registry().identities()) {
    CAPTURE(c.id);
    auto r = verify(c);
    CHECK(r.status == Status::pass);
    CHECK(r.order == c.default_order);
    if (c.id.rfind("quintic", 0) == 0) CHECK(r.order % 5 == 0);
  }
}

TEST_CASE("orders above the exact limit run modulo several primes") {
  auto primes = check_primes(3);
  REQUIRE(primes.size() == 3);
  for (auto p : primes) CHECK(p > (1ULL << 61));
  CHECK(primes == check_primes(3));

  IdentityCase good{"jtp", "", "", F({{1, 1}}), builtin_registry().identity("jtp-pentagonal").rhs};
  auto r = verify(good, 900);
  CHECK(r.status == Status::pass);
  CHECK(r.primes.size() == 3);

  IdentityCase bad{"bad", "", "", F({{1, -1}}), F({{1, -1}}) + q(750)};
  auto b = verify(bad, 900);
  CHECK(b.status == Status::mismatch);
  REQUIRE(b.first_mismatch);
  CHECK(b.first_mismatch->index == 750);
}

TEST_CASE("mismatch and erratum reporting") {
  IdentityCase c{"off-by-one", "", "", F({{1, -1}}), F({{1, -1}}) + 3 * q(17)};
  auto r = verify(c, 100);
  CHECK(r.status == Status::mismatch);
  REQUIRE(r.first_mismatch);
  CHECK(r.first_mismatch->index == 17);
  CHECK(r.first_mismatch->rhs - r.first_mismatch->lhs == 3);
  CHECK(is_failure(r.status));

  c.erratum_watch = true;
  auto w = verify(c, 100);
  CHECK(w.status == Status::erratum_candidate);
  CHECK_FALSE(is_failure(w.status));
}

TEST_CASE("chain replay results") {
  const auto& reg = builtin_registry();
  for (const auto& ch : reg.chains()) {
    CAPTURE(ch.id);
    auto r = replay(ch);
    CHECK(r.min_surviving() >= 200);
    if (ch.id == "b17-mod17") {
      CHECK(r.status == Status::erratum_candidate);
    } else {
      CHECK(r.status == Status::pass);
    }
  }
}

TEST_CASE("printed stage in the mod 17 chain differs at q^2") {
  auto r = replay(builtin_registry().chain("b17-mod17"));
  const StageResult* bad = nullptr;
  for (const auto& s : r.stages) {
    if (s.status != Status::pass) {
      bad = &s;
      break;
    }
  }
  REQUIRE(bad);
  CHECK(bad->status == Status::erratum_candidate);
  REQUIRE(bad->first_mismatch);
  CHECK(bad->first_mismatch->index == 2);
  // Later stages are re-derived and pass.
  CHECK(r.stages.back().status == Status::pass);
}

TEST_CASE("a chain without steps passes trivially") {
  ProofChain ch;
  ch.id = "empty";
  ch.start = F({{1, -1}});
  auto r = replay(ch, 50);
  CHECK(r.status == Status::pass);
  CHECK(r.stages.empty());
  CHECK(r.asserted() == 0);
}

TEST_CASE("small hand-built chain") {
  // 1/f1^2: the odd part is 2 f4^2 f16^2 / (f2^5 f8) in q^2 -> q.
  ProofChain ch;
  ch.id = "odd-part";
  ch.start = F({{1, -2}});
  ch.steps = {ProofStep::extract(1, 2), ProofStep::dilate_back(2),
              ProofStep::assert_equals("odd", 2 * F({{2, 2}, {8, 2}, {1, -5}, {4, -1}}))};
  auto r = replay(ch, 200);
  CHECK(r.status == Status::pass);
  REQUIRE(r.stages.size() == 3);
  CHECK(r.stages[2].surviving == 100);

  ch.steps.back() = ProofStep::assert_equals("odd", 2 * F({{2, 2}, {8, 2}, {1, -5}, {4, -1}}) + q(40));
  auto bad = replay(ch, 200);
  CHECK(bad.status == Status::mismatch);
  REQUIRE(bad.stages[2].first_mismatch);
  CHECK(bad.stages[2].first_mismatch->index == 40);
}

TEST_CASE("extraction below the precision floor is an error") {
  ProofChain ch;
  ch.id = "too-thin";
  ch.start = F({{1, -1}});
  ch.steps = {ProofStep::extract(0, 10)};
  auto r = replay(ch, 100);
  CHECK(r.status == Status::error);
  CHECK(r.message.find("raise the order") != std::string::npos);
}

TEST_CASE("property: replay verdicts do not depend on the truncation order") {
  std::mt19937_64 rng(test::kSeed);
  const auto& reg = builtin_registry();
  for (const auto& ch : reg.chains()) {
    CAPTURE(ch.id);
    auto base = replay(ch);
    std::uniform_int_distribution<std::size_t> extra(1, 40);
    const std::size_t order = ch.default_order + extra(rng) * 5;
    auto other = replay(ch, std::min(order, kExactOrderLimit));
    REQUIRE(other.stages.size() == base.stages.size());
    for (std::size_t i = 0; i < base.stages.size(); ++i) CHECK(other.stages[i].status == base.stages[i].status);
  }
}

TEST_CASE("registry lookup by id, hash and label") {
  const auto& reg = builtin_registry();
  const auto& c = reg.identity("inv-f1-sq");
  CHECK(&reg.identity(c.content_hash()) == &c);
  CHECK(&reg.identity(c.label) == &c);
  CHECK(c.content_hash().size() == 16);
  CHECK_THROWS_AS(reg.identity("no-such-identity"), Error);

  Registry r;
  r.add(IdentityCase{"x1", "same", "", F({{1, 1}}), F({{1, 1}})});
  r.add(IdentityCase{"x2", "same", "", F({{2, 1}}), F({{2, 1}})});
  try {
    r.identity("same");
    FAIL("expected an ambiguity error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::not_found);
    CHECK(std::string(e.what()).find("ambiguous") != std::string::npos);
  }
  CHECK_THROWS_AS(r.add(IdentityCase{"x1", "", "", F({{1, 1}}), F({{1, 1}})}), Error);
}

TEST_CASE("hash depends on content only") {
  IdentityCase a{"a", "l1", "s1", F({{1, 1}}), F({{2, 1}})};
  IdentityCase b{"b", "l2", "s2", F({{1, 1}}), F({{2, 1}})};
  IdentityCase c{"a", "l1", "s1", F({{1, 1}}), F({{2, 2}})};
  CHECK(a.content_hash() == b.content_hash());
  CHECK(a.content_hash() != c.content_hash());
}

TEST_CASE("registry records from text and file") {
  Registry r;
  r.load_text(
      "# comment\n"
      "\n"
      "euler | exact | 200 | (etaq 1 1) | (etaq 1 1)\n"
      "square | mod 2 | - | (pow (etaq 1 1) 2) | (etaq 2 1)\n");
  REQUIRE(r.identities().size() == 2);
  CHECK(r.identities()[0].default_order == 200);
  CHECK(r.identities()[1].modulus == 2);
  for (const auto& c : r.identities()) CHECK(verify(c).status == Status::pass);

  CHECK_THROWS_AS(r.load_text("only | three | fields"), Error);
  CHECK_THROWS_AS(r.load_text("z | mod 1 | - | (q 1) | (q 1)"), Error);
  CHECK_THROWS_AS(r.load_text("z | inexact | - | (q 1) | (q 1)"), Error);
  try {
    r.load_text("z | exact | - | (q 1 | (q 1)", "extra.txt");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
    CHECK(std::string(e.what()).find("extra.txt") != std::string::npos);
  }

  auto path = std::filesystem::temp_directory_path() / ("qbip-reg-" + std::to_string(::getpid()) + ".txt");
  {
    std::ofstream os(path);
    os << "file-case | exact | 100 | (etaq 1 -1) | (etaq 1 -1)\n";
  }
  Registry f;
  f.load_file(path);
  std::filesystem::remove(path);
  REQUIRE(f.identities().size() == 1);
  CHECK(f.identities()[0].id == "file-case");
  CHECK_THROWS_AS(f.load_file(path), Error);
}
