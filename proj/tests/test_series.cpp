#include "doctest.h"

#include "qbip/series.hpp"
#include "support.hpp"

using namespace qbip;
using qbip::test::coeffs;

namespace {

const CoeffRing Z = CoeffRing::integers();

Series ints(std::initializer_list<std::int64_t> c, CoeffRing ring = Z) {
  std::vector<std::int64_t> v(c);
  return Series::from_integers(ring, std::span<const std::int64_t>(v));
}

Series f(std::size_t k, std::size_t n, CoeffRing ring = Z) {
  auto c = test::eta_by_pentagonal(k, n);
  return Series::from_integers(ring, std::span<const mpz_class>(c));
}

void require_equal(const Series& a, const Series& b) {
  REQUIRE(a.order() == b.order());
  auto mm = first_mismatch(a, b);
  if (mm) FAIL("mismatch at q^" << mm->index << ": " << mm->lhs.get_str() << " vs " << mm->rhs.get_str());
}

}  // namespace

TEST_CASE("ring construction") {
  CHECK(CoeffRing::integers().exact());
  CHECK(CoeffRing::modulo(7).modulus() == 7);
  CHECK_THROWS_AS(CoeffRing::modulo(1), Error);
  CHECK_THROWS_AS(Series::from_integers(Z, std::span<const std::int64_t>()), Error);
}

TEST_CASE("residues are canonical") {
  auto s = ints({-1, 8, -15}, CoeffRing::modulo(7));
  CHECK(s.coeff(0) == 6);
  CHECK(s.coeff(1) == 1);
  CHECK(s.coeff(2) == 6);
}

TEST_CASE("add and sub") {
  CHECK(coeffs(ints({1, 1}) + ints({1, -1})) == coeffs(ints({2, 0})));
  auto f1 = f(1, 40);
  require_equal(f1 + Series::zero(Z, 40), f1);
  CHECK((f1 - f1).is_zero());
  CHECK((ints({1, 2, 3}) + ints({1, 1})).order() == 1);
  CHECK_THROWS_AS(add(ints({1}), ints({1}, CoeffRing::modulo(5))), Error);
}

TEST_CASE("mul") {
  std::vector<std::int64_t> geo(21, 1);
  auto g = Series::from_integers(Z, std::span<const std::int64_t>(geo));
  auto tele = ints({1, -1}) * g;
  CHECK(tele.order() == 1);
  auto one_minus_q = Series::from_integers(Z, std::span<const std::int64_t>(std::vector<std::int64_t>{
                                                     1, -1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}));
  require_equal(one_minus_q * g, Series::one(Z, 20));

  auto f1 = f(1, 200);
  require_equal(f1 * invert(f1), Series::one(Z, 200));

  auto sq = f(1, 6) * f(1, 6);
  CHECK(coeffs(sq) == coeffs(ints({1, -2, -1, 2, 1, 2, -2})));
  auto ref = test::naive_mul(coeffs(f1), coeffs(f1), 200);
  CHECK(coeffs(f1 * f1) == ref);
}

TEST_CASE("mul modulo large primes matches exact product") {
  std::mt19937_64 rng(test::kSeed);
  const std::uint64_t p = 4611686018427387847ULL;  // 2^62 - 57
  for (int t = 0; t < 5; ++t) {
    auto a = test::random_series(rng, Z, 80);
    auto b = test::random_series(rng, Z, 80, false, 10);
    require_equal(reduce_mod(a * b, p), reduce_mod(a, p) * reduce_mod(b, p));
  }
}

TEST_CASE("pow") {
  CHECK(coeffs(pow(ints({1, 1, 0, 0}), 2)) == coeffs(ints({1, 2, 1, 0})));
  require_equal(pow(f(1, 30), 0), Series::one(Z, 30));
  CHECK(coeffs(pow(ints({1, -1, 0, 0, 0, 0}), -1)) == coeffs(ints({1, 1, 1, 1, 1, 1})));
  CHECK_THROWS_AS(pow(ints({2, 1}), -1), Error);
  require_equal(pow(f(1, 60), 5), f(1, 60) * f(1, 60) * f(1, 60) * f(1, 60) * f(1, 60));
}

TEST_CASE("invert of f_1 gives partition numbers") {
  std::vector<std::size_t> all;
  for (std::size_t p = 1; p <= 100; ++p) all.push_back(p);
  auto p = test::count_partitions(100, all);
  CHECK(coeffs(invert(f(1, 100))) == p);
  std::vector<std::int64_t> first{1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42};
  for (std::size_t i = 0; i < first.size(); ++i) CHECK(invert(f(1, 10)).coeff(i) == first[i]);
  require_equal(invert(Series::one(Z, 9)), Series::one(Z, 9));
  auto a = ints({1, -1, -1, 0, 3, 5});
  require_equal(invert(invert(a)), a);
  CHECK_THROWS_AS(invert(ints({0, 1})), Error);
  CHECK_THROWS_AS(invert(ints({7, 1}, CoeffRing::modulo(7))), Error);
  CHECK(invert(ints({3, 1}, CoeffRing::modulo(7))).coeff(0) == 5);
}

TEST_CASE("dilate") {
  CHECK(coeffs(dilate(ints({1, 1}), 5)) == coeffs(ints({1, 0, 0, 0, 0, 1})));
  require_equal(dilate(f(1, 20), 25), f(25, 500));
  auto a = ints({3, -1, 4, 1, -5});
  require_equal(dilate(dilate(a, 2), 3), dilate(a, 6));
}

TEST_CASE("extract") {
  // theta series 1 + 2 sum q^(n^2)
  std::vector<mpz_class> phi(101, 0);
  phi[0] = 1;
  for (std::size_t n = 1; n * n <= 100; ++n) phi[n * n] = 2;
  auto ph = Series::from_integers(Z, std::span<const mpz_class>(phi));
  auto odd = extract(ph, 1, 2);
  CHECK(odd.order() == 49);
  for (std::size_t i = 0; i <= odd.order(); ++i) {
    bool hit = i == 0 || i == 4 || i == 12 || i == 24 || i == 40;
    CHECK(odd.coeff(i) == (hit ? 2 : 0));
  }

  auto a = ints({5, 4, 3, 2, 1, 0, -1});
  require_equal(extract(dilate(a, 4), 0, 4), a);

  auto f1 = f(1, 400);
  auto e = extract(f1, 2, 5);
  std::set<std::size_t> expected;
  for (auto [x, s] : test::pentagonal(400)) {
    if (x % 5 == 2) expected.insert((x - 2) / 5);
  }
  for (std::size_t i = 0; i <= e.order(); ++i) CHECK(!e.is_zero_at(i) == (expected.count(i) == 1));
  CHECK_THROWS_AS(extract(a, 3, 3), Error);
}

TEST_CASE("select_residue keeps spacing") {
  auto a = ints({0, 1, 2, 3, 4, 5, 6, 7});
  auto s = select_residue(a, 1, 3);
  CHECK(s.order() == 6);
  CHECK(coeffs(s) == coeffs(ints({1, 0, 0, 4, 0, 0, 7})));
}

TEST_CASE("reduce_mod and equality") {
  CHECK(reduce_mod(f(2, 300) - f(1, 300) * f(1, 300), 2).is_zero());
  auto a = f(1, 50);
  CHECK(!first_mismatch(a, a, 50));
  auto one = Series::one(Z, 9);
  auto mm = first_mismatch(one, one + Series::monomial(Z, 9, 9));
  REQUIRE(mm);
  CHECK(mm->index == 9);
  CHECK(mm->lhs == 0);
  CHECK(mm->rhs == 1);
  CHECK_THROWS_AS(first_mismatch(one, one, 10), Error);
  CHECK(reduce_mod(ints({10, 11}, CoeffRing::modulo(15)), 5).coeff(1) == 1);
  CHECK_THROWS_AS(reduce_mod(ints({10, 11}, CoeffRing::modulo(15)), 7), Error);
}

TEST_CASE("ring laws on random series") {
  std::mt19937_64 rng(test::kSeed + 1);
  for (CoeffRing ring : {Z, CoeffRing::modulo(17), CoeffRing::modulo(4611686018427387847ULL)}) {
    for (int t = 0; t < 25; ++t) {
      auto a = test::random_series(rng, ring, 64);
      auto b = test::random_series(rng, ring, 64, false, 30);
      auto c = test::random_series(rng, ring, 64, false, 90);
      require_equal((a + b) + c, a + (b + c));
      require_equal(a * b, b * a);
      require_equal(a * (b + c), a * b + a * c);
      require_equal((a * b) * c, a * (b * c));
    }
  }
}

TEST_CASE("invert is a two-sided inverse") {
  std::mt19937_64 rng(test::kSeed + 2);
  for (CoeffRing ring : {Z, CoeffRing::modulo(13)}) {
    for (int t = 0; t < 100; ++t) {
      auto a = test::random_series(rng, ring, 60, true, t % 2 ? 20 : 80);
      auto one = Series::one(ring, 60);
      require_equal(a * invert(a), one);
      require_equal(invert(a) * a, one);
    }
  }
}

TEST_CASE("dissection laws") {
  std::mt19937_64 rng(test::kSeed + 3);
  for (int t = 0; t < 20; ++t) {
    auto a = test::random_series(rng, Z, 90);
    for (std::size_t s : {2u, 3u, 5u, 7u}) {
      require_equal(extract(dilate(a, s), 0, s), a);
      for (std::size_t r = 1; r < s; ++r) CHECK(extract(dilate(a, s), r, s).is_zero());
      const std::size_t n = a.order() - s;
      std::vector<mpz_class> acc(n + 1, 0);
      for (std::size_t r = 0; r < s; ++r) {
        auto part = dilate(extract(a, r, s), s);
        for (std::size_t j = r; j <= n; ++j) acc[j] += part.coeff(j - r);
      }
      CHECK(acc == coeffs(a.truncate(n)));
    }
  }
}

TEST_CASE("exact and modular paths commute") {
  std::mt19937_64 rng(test::kSeed + 4);
  for (std::uint64_t p : {2ULL, 3ULL, 7ULL, 11ULL, 4611686018427387847ULL}) {
    for (int t = 0; t < 10; ++t) {
      auto a = test::random_series(rng, Z, 64, true);
      auto b = test::random_series(rng, Z, 64);
      auto ap = reduce_mod(a, p);
      auto bp = reduce_mod(b, p);
      require_equal(reduce_mod(a + b, p), ap + bp);
      require_equal(reduce_mod(a * b, p), ap * bp);
      require_equal(reduce_mod(pow(a, 3), p), pow(ap, 3));
      require_equal(reduce_mod(pow(a, -2), p), pow(ap, -2));
      require_equal(reduce_mod(extract(a, 1, 3), p), extract(ap, 1, 3));
      require_equal(reduce_mod(dilate(a, 4), p), dilate(ap, 4));
    }
  }
}
