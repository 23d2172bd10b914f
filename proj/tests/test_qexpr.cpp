#include "doctest.h"

#include "qbip/qexpr.hpp"
#include "support.hpp"

using namespace qbip;
using namespace qbip::dsl;
using qbip::test::coeffs;

namespace {

const CoeffRing Z = CoeffRing::integers();

std::vector<mpz_class> ints(std::initializer_list<long> c) {
  std::vector<mpz_class> v;
  for (long x : c) v.emplace_back(x);
  return v;
}

// (1 - q^t) or its inverse 1 + q^t + q^2t + ... as a plain vector.
std::vector<mpz_class> factor(std::size_t t, bool inverse, std::size_t n) {
  std::vector<mpz_class> v(n + 1, 0);
  v[0] = 1;
  if (inverse) {
    for (std::size_t i = t; i <= n; i += t) v[i] = 1;
  } else if (t <= n) {
    v[t] = -1;
  }
  return v;
}

}  // namespace

TEST_CASE("atom evaluation") {
  CHECK(coeffs(eval(eta(1), Z, 15)) == ints({1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1, 0, 0, -1}));
  CHECK(coeffs(eval(phi(1), Z, 9)) == ints({1, 2, 0, 0, 2, 0, 0, 0, 0, 2}));
  CHECK(coeffs(eval(psi(1), Z, 10)) == ints({1, 1, 0, 1, 0, 0, 1, 0, 0, 0, 1}));
  CHECK(coeffs(eval(qpow(3), Z, 4)) == ints({0, 0, 0, 1, 0}));
  CHECK(coeffs(eval(constant(-4), Z, 2)) == ints({-4, 0, 0}));
  CHECK(coeffs(eval(pochhammer(2, 5), Z, 8)) == ints({1, 0, -1, 0, 0, 0, 0, -1, 0}));
}

TEST_CASE("S against a brute-force product of its four factors") {
  const std::size_t n = 200;
  auto v = factor(5, false, n);
  for (std::size_t j = 0; 5 + 25 * j <= n; ++j) {
    if (j) v = test::naive_mul(v, factor(5 + 25 * j, false, n), n);
  }
  for (std::size_t t = 20; t <= n; t += 25) v = test::naive_mul(v, factor(t, false, n), n);
  for (std::size_t t = 10; t <= n; t += 25) v = test::naive_mul(v, factor(t, true, n), n);
  for (std::size_t t = 15; t <= n; t += 25) v = test::naive_mul(v, factor(t, true, n), n);
  auto s = eval(rr_S(), Z, n);
  CHECK(s.coeff(0) == 1);
  CHECK(coeffs(s) == v);
}

TEST_CASE("composites print by name") {
  CHECK(to_string(rr_S()) == "S");
  CHECK(to_string(cubic_u()) == "u");
  CHECK(to_string(F({{2, 5}, {1, -2}, {4, -2}})) == "(etaq 2 5 1 -2 4 -2)");
  auto e = 3 * F({{1, 5}, {3, 1}}) + q(2) * pow(rr_S(), -1);
  CHECK(to_string(e) == "(sum (3 (etaq 1 5 3 1)) (1 (mul (q 2) (pow S -1))))");
}

TEST_CASE("text form round-trips") {
  std::vector<Expr> es = {
      rr_S(),
      rr_S13(),
      cubic_u() * cubic_v(),
      F({{81, 1}, {1, 15}}),
      theta(-1, 1, -1, 2),
      dilation(phi(3), 4) + (-7) * psi(2),
      laurent(rr_S(), {{1, 0, -7}, {2, 1, -6}, {2, 14, 7}}),
      power(pochhammer(3, 7), -3),
  };
  for (const auto& e : es) {
    auto back = parse_expr(to_string(e));
    CHECK(back == e);
    CHECK(coeffs(eval(back, Z, 60)) == coeffs(eval(e, Z, 60)));
  }
  CHECK(parse_expr("  (sum (2 (f 1))\n (-1 (q 3)))") == 2 * eta(1) + (-1) * q(3));
}

TEST_CASE("parse errors") {
  for (const char* bad : {"", "(", "(f)", "(f 0)", "(poch 5 3)", "(frob 1)", "(f 1))", "T",
                          "(theta 2 1 1 1)", "(sum (x (f 1)))", "(q -1)"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_expr(bad), Error);
  }
  try {
    parse_expr("(f 1 2)");
    FAIL("expected a parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse);
  }
}

TEST_CASE("invalid atoms are rejected at construction") {
  CHECK_THROWS_AS(pochhammer(0, 3), Error);
  CHECK_THROWS_AS(pochhammer(4, 3), Error);
  CHECK_THROWS_AS(eta(0), Error);
  CHECK_THROWS_AS(theta(0, 1, 1, 1), Error);
  CHECK_THROWS_AS(dilation(eta(1), 0), Error);
}

TEST_CASE("negative powers need a unit constant term") {
  CHECK_THROWS_AS(eval(power(qpow(1), -1), Z, 10), Error);
  CHECK_THROWS_AS(eval(power(constant(2), -1), Z, 10), Error);
  CHECK(eval(power(constant(2), -1), CoeffRing::modulo(7), 3).coeff(0) == 4);
}

TEST_CASE("Jacobi triple product: sum form equals product form") {
  struct Atom {
    int sa;
    std::int64_t ua;
    int sb;
    std::int64_t ub;
  };
  for (Atom a : std::vector<Atom>{{1, 1, 1, 1}, {-1, 1, -1, 2}, {1, 1, 1, 3}, {-1, 1, -1, 1},
                                  {1, 2, 1, 2}, {-1, 1, -1, 3}, {1, 1, 1, 2}, {-1, 2, -1, 3},
                                  {1, 3, 1, 5}, {-1, 5, -1, 20}}) {
    CAPTURE(a.ua);
    CAPTURE(a.ub);
    auto sum_form = theta_sum(a.sa, a.ua, a.sb, a.ub, Z, 200);
    auto prod_form = theta_product(a.sa, a.ua, a.sb, a.ub, Z, 200);
    CHECK(!first_mismatch(sum_form, prod_form));
  }
  CHECK(!first_mismatch(theta_sum(1, 1, 1, 1, Z, 50), eval(phi(1), Z, 50)));
  CHECK(!first_mismatch(theta_sum(-1, 1, -1, 2, Z, 50), eval(eta(1), Z, 50)));
  CHECK(!first_mismatch(theta_sum(1, 1, 1, 3, Z, 50), eval(psi(1), Z, 50)));
}

TEST_CASE("dilation commutes with evaluation") {
  for (const auto& e : {eta(1), phi(1), rr_S(), cubic_v(), F({{2, 3}, {1, -2}})}) {
    for (std::size_t k : {2u, 3u, 13u}) {
      auto lhs = eval(dilation(e, static_cast<std::int64_t>(k)), Z, 40 * k);
      auto rhs = dilate(eval(e, Z, 40), k);
      CHECK(!first_mismatch(lhs, rhs));
    }
  }
  // Orders that are not multiples of the factor
  CHECK(!first_mismatch(eval(dilation(eta(1), 3), Z, 50), eval(eta(3), Z, 50)));
}

TEST_CASE("evaluation respects ring reduction") {
  std::vector<Expr> es = {rr_S(), cubic_u(), pow(cubic_v(), -3) + 4 * q(1) * pow(cubic_v(), 2),
                          F({{2, 28}, {1, -4}, {4, -8}}), rr_S13(), theta(1, 2, 1, 5)};
  for (const auto& e : es) {
    auto exact = eval(e, Z, 150);
    for (std::uint64_t p : {2ULL, 7ULL, 17ULL, 4611686018427387847ULL}) {
      CHECK(!first_mismatch(reduce_mod(exact, p), eval(e, CoeffRing::modulo(p), 150)));
    }
  }
}

TEST_CASE("f_k support is k times the generalized pentagonal numbers") {
  for (std::size_t k : {1u, 2u, 5u, 9u}) {
    auto s = eval(eta(static_cast<std::int64_t>(k)), Z, 600);
    std::vector<mpz_class> expected(601, 0);
    for (auto [e, sign] : test::pentagonal(600 / k)) expected[e * k] = sign;
    CHECK(coeffs(s) == expected);
  }
}

TEST_CASE("memoization reuses subtrees") {
  Evaluator ev(Z);
  auto a = ev(pow(rr_S(), 3) * rr_S(), 100);
  auto before = ev.memo_size();
  auto b = ev(rr_S(), 80);
  CHECK(ev.memo_size() == before);
  CHECK(b.order() == 80);
  CHECK(!first_mismatch(b, eval(rr_S(), Z, 80)));
  CHECK(!first_mismatch(a, eval(pow(rr_S(), 4), Z, 100)));
}
