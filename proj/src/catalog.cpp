// Built-in identities and proof chains.

#include "qbip/identities.hpp"

namespace qbip {

namespace {

using namespace dsl;

// f_1 = f_25 T with T = 1/S - q - q^2 S.
Expr T() { return pow(rr_S(), -1) - q(1) - q(2) * rr_S(); }
Expr T13() { return pow(rr_S13(), -1) - q(13) - q(26) * rr_S13(); }
// f_5^6 / f_25^6 written in S.
Expr R5() { return pow(rr_S(), -5) - 11 * q(5) - q(10) * pow(rr_S(), 5); }
Expr R() { return F({{5, 6}, {25, -6}}); }
Expr U() { return pow(cubic_u(), -1) - 3 * q(1) + 4 * q(3) * pow(cubic_u(), 2); }
Expr V3() { return pow(pow(cubic_v(), -1) + 4 * q(1) * pow(cubic_v(), 2), 3); }

Expr inv_f1_sq() { return F({{8, 5}, {2, -5}, {16, -2}}) + 2 * q(1) * F({{4, 2}, {16, 2}, {2, -5}, {8, -1}}); }
Expr inv_f1_4() { return F({{4, 14}, {2, -14}, {8, -4}}) + 4 * q(1) * F({{4, 2}, {8, 4}, {2, -10}}); }
Expr f1_4() { return F({{4, 10}, {2, -2}, {8, -4}}) - 4 * q(1) * F({{2, 2}, {8, 4}, {4, -2}}); }
Expr f3_over_f1_3() {
  return F({{4, 6}, {6, 3}, {2, -9}, {12, -2}}) + 3 * q(1) * F({{4, 2}, {6, 1}, {12, 2}, {2, -7}});
}
Expr f1_3_over_f3() { return F({{4, 3}, {12, -1}}) - 3 * q(1) * F({{2, 2}, {12, 3}, {4, -1}, {6, -2}}); }
Expr f1_f3() {
  return F({{2, 1}, {8, 2}, {12, 4}, {4, -2}, {6, -1}, {24, -2}}) -
         q(1) * F({{4, 4}, {6, 1}, {24, 2}, {2, -1}, {8, -2}, {12, -2}});
}
Expr f3_2_over_f1_2() {
  return F({{6, 1}, {12, 2}, {4, 4}, {2, -5}, {8, -1}, {24, -1}}) +
         2 * q(1) * F({{6, 2}, {8, 1}, {24, 1}, {4, 1}, {2, -4}, {12, -1}});
}

Expr Q5() {
  return laurent(rr_S(), {{1, 8, 4}, {-1, 7, 3}, {2, 6, 2}, {-3, 5, 1}, {5, 4, 0}, {3, 3, -1}, {2, 2, -2}, {1, 1, -3},
                          {1, 0, -4}});
}

IdentityCase identity(std::string id, std::string label, std::string section, Expr lhs, Expr rhs,
                      std::size_t order, std::uint64_t modulus = 0) {
  IdentityCase c;
  c.id = std::move(id);
  c.label = std::move(label);
  c.section = std::move(section);
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  c.default_order = order;
  c.modulus = modulus;
  return c;
}

void add_identities(Registry& reg) {
  const std::string two = "2-dissections";
  const std::string five = "5-dissections";
  const std::string three = "3-dissections";
  reg.add(identity("inv-f1-sq", "a", two, F({{1, -2}}), inv_f1_sq(), 500));
  reg.add(identity("inv-f1-4", "b", two, F({{1, -4}}), inv_f1_4(), 500));
  reg.add(identity("f1-4", "f1^4", two, F({{1, 4}}), f1_4(), 500));
  reg.add(identity("f3-over-f1-cubed", "f3/f1^3", two, F({{3, 1}, {1, -3}}), f3_over_f1_3(), 500));
  reg.add(identity("f1-cubed-over-f3", "f1^3/f3", two, F({{1, 3}, {3, -1}}), f1_3_over_f3(), 500));
  reg.add(identity("f1-f3", "f1 f3", two, F({{1, 1}, {3, 1}}), f1_f3(), 500));
  reg.add(identity("f3-sq-over-f1-sq", "f3^2/f1^2", two, F({{3, 2}, {1, -2}}), f3_2_over_f1_2(), 500));

  reg.add(identity("quintic-f1", "f1 in S", five, eta(1), F({{25, 1}}) * T(), 400));
  reg.add(identity("quintic-ratio", "f5^6/f25^6 in S", five, R(), R5(), 400));
  reg.add(identity("quintic-inv-f1", "1/f1 in S", five, F({{1, -1}}), F({{25, 5}, {5, -6}}) * Q5(), 400));

  {
    auto c = identity("cubic-f1-cubed", "f1^3 in u", three, F({{1, 3}}), F({{9, 3}}) * U(), 600);
    c.erratum_watch = true;
    c.note = "printed form tested as is";
    reg.add(std::move(c));
  }
  reg.add(identity("cubic-v", "f1^12/f3^12 in v", three, F({{1, 12}, {3, -12}}) + 27 * q(1), V3(), 600));

  for (std::int64_t p : {3, 7, 11, 13, 17}) {
    reg.add(identity("frobenius-" + std::to_string(p), "f" + std::to_string(p) + " = f1^" + std::to_string(p),
                     "binomial theorem", eta(p), F({{1, p}}), 500, static_cast<std::uint64_t>(p)));
  }

  const std::string jtp = "theta products";
  reg.add(identity("jtp-phi", "phi", jtp, phi(1), F({{2, 5}, {1, -2}, {4, -2}}), 500));
  reg.add(identity("jtp-psi", "psi", jtp, psi(1), F({{2, 2}, {1, -1}}), 500));
  reg.add(identity("jtp-pentagonal", "f(-q,-q^2)", jtp, theta(-1, 1, -1, 2), eta(1), 500));
}

// Builds a chain with ordinal stage labels "#1", "#2", ...
class ChainBuilder {
 public:
  ChainBuilder(std::string id, std::string title, std::vector<std::string> proves, Expr start, std::size_t order) {
    c_.id = std::move(id);
    c_.title = std::move(title);
    c_.proves = std::move(proves);
    c_.start = std::move(start);
    c_.default_order = order;
  }

  ChainBuilder& reduce(std::uint64_t m) { return push(ProofStep::reduce(m)); }
  ChainBuilder& sub(std::initializer_list<const char*> ids) {
    for (const char* id : ids) push(ProofStep::substitute(id));
    return *this;
  }
  ChainBuilder& ext(std::size_t r, std::size_t s) { return push(ProofStep::extract(r, s)); }
  ChainBuilder& back(std::size_t s) { return push(ProofStep::dilate_back(s)); }
  /// Extract residue r mod s, then relabel q^s as q.
  ChainBuilder& take(std::size_t r, std::size_t s) { return ext(r, s).back(s); }
  ChainBuilder& combine(std::vector<std::pair<std::int64_t, std::string>> terms) {
    return push(ProofStep::combine(std::move(terms)));
  }
  ChainBuilder& recall(const std::string& label) { return push(ProofStep::recall(label)); }

  /// Asserts the current series and returns the stage label.
  std::string is(Expr e, bool erratum_watch = false) {
    std::string label = "#" + std::to_string(++n_);
    push(ProofStep::assert_equals(label, std::move(e), erratum_watch));
    return label;
  }

  ProofChain done() { return std::move(c_); }

 private:
  ChainBuilder& push(ProofStep s) {
    c_.steps.push_back(std::move(s));
    return *this;
  }
  ProofChain c_;
  int n_ = 0;
};

ProofChain chain_3_7() {
  ChainBuilder b("b3-7-mod7", "B_{3,7} modulo 7", {"b3-7"}, F({{3, 1}, {7, 1}, {1, -2}}), 500);
  const Expr w4_f1 = F({{4, 6}, {6, 4}, {2, -4}, {12, -2}});
  const Expr w4_f3 = F({{2, 14}, {12, 2}, {4, -6}, {6, -2}});
  const Expr even5 = F({{4, 8}, {12, 4}, {2, -1}, {6, -1}, {8, -2}, {24, -2}});
  const Expr odd1 = F({{2, 3}, {8, 6}, {12, 4}, {4, -4}, {6, -1}, {24, -2}});
  const Expr odd2 = F({{4, 14}, {6, 1}, {24, 2}, {2, -3}, {8, -6}, {12, -2}});
  const Expr even2 = F({{2, 1}, {4, 2}, {6, 1}, {8, 2}, {24, 2}, {12, -2}});
  const Expr g1 = F({{1, 3}, {4, 6}, {6, 4}, {2, -4}, {3, -1}, {12, -2}});
  const Expr g2 = F({{2, 14}, {3, 1}, {12, 2}, {1, -3}, {4, -6}, {6, -2}});
  const Expr h1 = F({{2, 5}, {6, 1}});
  const Expr h2 = F({{4, 9}, {6, 4}, {2, -4}, {12, -3}});
  const Expr h3 = F({{4, 5}, {6, 2}, {12, 1}, {2, -2}});
  const Expr h4 = F({{2, 7}, {12, 4}, {4, -4}, {6, -1}});
  const Expr base = F({{1, 5}, {3, 1}});
  const Expr k2 = F({{2, 9}, {3, 4}, {1, -4}, {6, -3}});

  b.reduce(7);
  const auto gen = b.is(base);
  b.sub({"f1-4", "f1-f3"});
  b.is(f1_4() * f1_f3());
  b.is(even5 + 3 * q(1) * odd1 + 6 * q(1) * odd2 + 4 * q(2) * even2);
  b.take(1, 2);
  b.is(3 * g1 + 6 * g2);
  b.sub({"f3-over-f1-cubed", "f1-cubed-over-f3"});
  b.is(3 * w4_f1 * f1_3_over_f3() + 6 * w4_f3 * f3_over_f1_3());
  b.is(6 * h1 + 3 * h2 + 5 * q(1) * h3 + 4 * q(1) * h4);
  b.take(0, 2);
  const auto at4n1 = b.is(6 * base + 3 * k2);
  b.sub({"f1-4", "f1-f3", "f3-sq-over-f1-sq"});
  b.is(6 * f1_4() * f1_f3() + 3 * F({{2, 9}, {6, -3}}) * pow(f3_2_over_f1_2(), 2));
  b.is(2 * even5 + 5 * q(1) * F({{4, 5}, {12, 1}}) + 4 * q(1) * odd1 + q(1) * odd2 + q(2) * even2);
  b.take(1, 2);
  b.is(5 * h1 + 4 * g1 + g2);
  b.sub({"f3-over-f1-cubed", "f1-cubed-over-f3"});
  b.is(5 * h1 + 4 * w4_f1 * f1_3_over_f3() + w4_f3 * f3_over_f1_3());
  b.is(6 * h1 + 4 * h2 + 2 * q(1) * h3 + 3 * q(1) * h4);
  b.take(0, 2);
  b.is(6 * base + 4 * k2);
  b.combine({{5, gen}, {6, at4n1}});
  b.is(6 * base + 4 * k2);
  // B(4^6 n + 1365) = 2 B(4n+1) + 2 B(n)
  b.combine({{2, at4n1}, {2, gen}});
  b.is(6 * k2);
  b.sub({"f3-sq-over-f1-sq"});
  b.is(6 * F({{2, 9}, {6, -3}}) * pow(f3_2_over_f1_2(), 2));
  b.is(6 * even5 + 3 * q(1) * F({{4, 5}, {12, 1}}) + 3 * q(2) * even2);
  b.take(1, 2);
  const auto last = b.is(3 * h1);
  b.ext(1, 2);
  b.is(c(0));
  b.recall(last);
  b.take(0, 2);
  b.is(3 * base);
  return b.done();
}

// T^7 modulo 3, as a Laurent polynomial in S.
Expr T7_mod3() {
  return laurent(rr_S(), {{1, 0, -7}, {2, 1, -6}, {2, 2, -5}, {1, 3, -4}, {2, 4, -3}, {2, 5, -2}, {2, 6, -1},
                          {1, 7, 0}, {1, 8, 1}, {2, 9, 2}, {1, 10, 3}, {1, 11, 4}, {1, 12, 5}, {2, 13, 6},
                          {2, 14, 7}});
}

ProofChain chain_9_5() {
  ChainBuilder b("b9-5-mod3", "B_{9,5} modulo 3", {"b9-5"}, F({{9, 1}, {5, 1}, {1, -2}}), 1050);
  const Expr A = F({{5, 1}, {25, 7}});
  const Expr B = F({{5, 7}, {25, 1}});
  b.reduce(3);
  b.is(F({{1, 7}, {5, 1}}));
  b.sub({"quintic-f1"});
  b.is(A * pow(T(), 7));
  b.is(A * T7_mod3());
  b.ext(2, 5);
  b.is(A * (2 * R5() + 2 * q(5)));
  b.sub({"quintic-ratio"});
  b.is(2 * B + 2 * q(5) * A);
  b.back(5);
  b.is(2 * F({{1, 7}, {5, 1}}) + 2 * q(1) * F({{1, 1}, {5, 7}}));
  b.sub({"quintic-f1"});
  b.is(2 * A * T7_mod3() + 2 * B * T() * q(1));
  b.ext(2, 5);
  b.is(2 * A * (2 * R5() + 2 * q(5)) + B);
  b.sub({"quintic-ratio"});
  b.is(2 * B + q(5) * A);
  b.back(5);
  b.is(2 * F({{1, 7}, {5, 1}}) + q(1) * F({{1, 1}, {5, 7}}));
  b.sub({"quintic-f1"});
  b.is(2 * A * T7_mod3() + B * T() * q(1));
  b.ext(2, 5);
  b.is(2 * A * (2 * R5() + 2 * q(5)) + 2 * B);
  b.sub({"quintic-ratio"});
  b.is(q(5) * A);
  b.back(5);
  b.is(q(1) * F({{1, 1}, {5, 7}}));
  b.sub({"quintic-f1"});
  const auto last = b.is(B * T() * q(1));
  b.take(2, 5);
  b.is(2 * F({{1, 7}, {5, 1}}));
  for (std::size_t r : {4u, 0u}) {
    b.recall(last);
    b.ext(r, 5);
    b.is(c(0));
  }
  return b.done();
}

ProofChain chain_5_11() {
  ChainBuilder b("b5-11-mod11", "B_{5,11} modulo 11", {"b5-11"}, F({{5, 1}, {11, 1}, {1, -2}}), 1050);
  const Expr A9 = F({{5, 1}, {25, 9}});
  const Expr B73 = F({{5, 7}, {25, 3}});
  const Expr C37 = F({{5, 3}, {25, 7}});
  const Expr D91 = F({{5, 9}, {25, 1}});
  const Expr gen = F({{5, 1}, {1, 9}});
  auto t9 = [](const Expr& r) {
    return 2 * q(9) + 9 * q(4) * r +
           laurent(rr_S(), {{10, 18, 9}, {2, 17, 8}, {6, 16, 7}, {10, 15, 6}, {5, 13, 4}, {6, 12, 3}, {9, 11, 2},
                            {7, 10, 1}, {4, 8, -1}, {9, 7, -2}, {5, 6, -3}, {5, 5, -4}, {10, 3, -6}, {5, 2, -7},
                            {2, 1, -8}, {1, 0, -9}});
  };
  b.reduce(11);
  const auto g0 = b.is(gen);
  b.sub({"quintic-f1"});
  b.is(A9 * pow(T(), 9));
  b.is(A9 * t9(R5()));
  b.sub({"quintic-ratio"});
  b.is(A9 * t9(R()));
  b.take(4, 5);
  b.is(9 * F({{1, 7}, {5, 3}}) + 2 * q(1) * F({{1, 1}, {5, 9}}));
  b.sub({"quintic-f1"});
  b.is(9 * C37 * pow(T(), 7) + 2 * D91 * T() * q(1));
  b.ext(2, 5);
  b.is(9 * C37 * (4 * q(5) + 3 * R5()) + 9 * D91);
  b.sub({"quintic-ratio"});
  b.is(9 * C37 * (4 * q(5) + 3 * R()) + 9 * D91);
  b.back(5);
  const auto g1 = b.is(3 * gen + 3 * q(1) * F({{5, 7}, {1, 3}}));
  b.sub({"quintic-f1"});
  b.is(3 * A9 * pow(T(), 9) + 3 * B73 * pow(T(), 3) * q(1));
  b.ext(4, 5);
  b.is(3 * A9 * (2 * q(5) + 9 * R5()) + 4 * B73);
  b.sub({"quintic-ratio"});
  b.is(3 * A9 * (2 * q(5) + 9 * R()) + 4 * B73);
  b.back(5);
  b.is(9 * F({{1, 7}, {5, 3}}) + 6 * q(1) * F({{1, 1}, {5, 9}}));
  b.sub({"quintic-f1"});
  b.take(2, 5);
  const Expr g2 = 10 * F({{1, 9}, {5, 1}}) + 3 * q(1) * F({{1, 3}, {5, 7}});
  b.is(g2);
  b.combine({{1, g1}, {7, g0}});
  b.is(g2);
  // A_5 = 5, a_5 = 6
  b.combine({{5, g1}, {6, g0}});
  b.is(10 * F({{1, 9}, {5, 1}}) + 4 * q(1) * F({{1, 3}, {5, 7}}));
  b.sub({"quintic-f1"});
  b.is(10 * A9 * pow(T(), 9) + 4 * B73 * pow(T(), 3) * q(1));
  b.ext(4, 5);
  b.is(10 * A9 * (2 * q(5) + 9 * R5()) + 9 * B73);
  b.sub({"quintic-ratio"});
  b.is(10 * A9 * (2 * q(5) + 9 * R()) + 9 * B73);
  b.back(5);
  b.is(9 * q(1) * F({{1, 1}, {5, 9}}));
  b.sub({"quintic-f1"});
  const auto last = b.is(9 * D91 * T() * q(1));
  b.take(2, 5);
  b.is(2 * F({{1, 9}, {5, 1}}));
  for (std::size_t r : {4u, 0u}) {
    b.recall(last);
    b.ext(r, 5);
    b.is(c(0));
  }
  return b.done();
}

Expr t11_terms(bool full) {
  if (full) {
    return laurent(rr_S(), {{12, 22, 11}, {2, 21, 10}, {8, 20, 9}, {10, 19, 8}, {6, 18, 7}, {12, 17, 6},
                            {7, 16, 5},   {12, 14, 3}, {4, 13, 2}, {10, 12, 1}, {8, 11, 0}, {3, 10, -1},
                            {4, 9, -2},   {1, 8, -3},  {6, 6, -5}, {12, 5, -6}, {7, 4, -7}, {10, 3, -8},
                            {5, 2, -9},   {2, 1, -10}, {1, 0, -11}});
  }
  return laurent(rr_S(), {{12, 22, 11}, {8, 20, 9}, {10, 19, 8}, {6, 18, 7}, {12, 17, 6}, {12, 14, 3}, {4, 13, 2},
                          {10, 12, 1}, {8, 11, 0}, {3, 10, -1}, {4, 9, -2}, {1, 8, -3}, {12, 5, -6}, {7, 4, -7},
                          {10, 3, -8}, {5, 2, -9}, {1, 0, -11}});
}

ProofChain chain_5_13() {
  ChainBuilder b("b5-13-mod13", "B_{5,13} modulo 13", {"b5-13"}, F({{5, 1}, {13, 1}, {1, -2}}), 1050);
  const Expr A11 = F({{5, 1}, {25, 11}});
  const Expr B57 = F({{5, 5}, {25, 7}});
  const Expr C75 = F({{5, 7}, {25, 5}});
  const Expr D111 = F({{5, 11}, {25, 1}});
  const Expr E13 = F({{325, 1}, {5, -1}});
  const Expr Q = F({{65, 1}, {25, 5}, {5, -6}});
  const Expr gen = F({{5, 1}, {1, 11}});
  auto first = [&](std::int64_t a, std::int64_t bb, std::int64_t cc) {
    return a * F({{1, 11}, {5, 1}}) + bb * q(1) * F({{1, 5}, {5, 7}}) + cc * q(2) * F({{65, 1}, {1, -1}});
  };
  auto second = [&](std::int64_t a, std::int64_t bb, std::int64_t cc) {
    return a * F({{13, 1}, {5, -1}}) + bb * q(1) * F({{1, 7}, {5, 5}}) + cc * q(2) * F({{1, 1}, {5, 11}});
  };
  auto t11_1 = [&](const Expr& r) { return 8 * q(10) + 2 * pow(r, 2) + 11 * q(5) * r; };
  auto lifted1 = [&](std::int64_t a, std::int64_t bb, std::int64_t cc) {
    return a * E13 * T13() + bb * B57 * pow(T(), 7) * q(1) + cc * D111 * T() * q(2);
  };
  auto lifted2 = [&](std::int64_t a, std::int64_t bb, std::int64_t cc) {
    return a * A11 * pow(T(), 11) + bb * C75 * pow(T(), 5) * q(1) + cc * Q * Q5() * q(2);
  };

  b.reduce(13);
  const auto g0 = b.is(gen);
  b.sub({"quintic-f1"});
  b.is(A11 * pow(T(), 11));
  b.is(A11 * t11_terms(true));
  b.is(A11 * (2 * q(1) * pow(R5(), 2) + 11 * q(6) * R5() + t11_terms(false)));
  b.sub({"quintic-ratio"});
  b.is(A11 * (2 * q(1) * pow(R(), 2) + 11 * q(6) * R() + t11_terms(false)));
  b.take(1, 5);
  b.is(second(2, 11, 8));
  b.sub({"quintic-f1"});
  b.is(lifted1(2, 11, 8));
  b.ext(3, 5);
  b.is(11 * E13 * q(10) + 11 * B57 * (8 * q(5) + R5()) + 5 * D111);
  b.sub({"quintic-ratio"});
  b.is(3 * D111 + 10 * q(5) * B57 + 11 * q(10) * E13);
  b.back(5);
  const auto g1 = b.is(first(3, 10, 11));
  b.sub({"quintic-f1", "quintic-inv-f1"});
  b.is(lifted2(3, 10, 11));
  b.ext(1, 5);
  b.sub({"quintic-ratio"});
  b.is(3 * A11 * t11_1(R()) + 10 * C75 * R() + 3 * Q * q(5));
  b.back(5);
  b.is(second(3, 10, 11));
  b.sub({"quintic-f1"});
  b.is(lifted1(3, 10, 11));
  b.ext(3, 5);
  b.sub({"quintic-ratio"});
  b.is(10 * E13 * q(10) + 10 * B57 * (8 * q(5) + R()) + 2 * D111);
  b.back(5);
  b.is(first(12, 2, 10));
  b.combine({{8, g1}, {1, g0}});
  b.is(first(12, 2, 10));
  b.sub({"quintic-f1", "quintic-inv-f1"});
  b.is(lifted2(12, 2, 10));
  b.ext(1, 5);
  b.is(12 * A11 * t11_1(R()) + 2 * C75 * R() + 11 * Q * q(5));
  b.back(5);
  b.is(5 * q(2) * F({{1, 1}, {5, 11}}));
  b.sub({"quintic-f1"});
  const auto last = b.is(5 * D111 * T() * q(2));
  b.take(3, 5);
  b.is(8 * F({{1, 11}, {5, 1}}));
  for (std::size_t r : {1u, 0u}) {
    b.recall(last);
    b.ext(r, 5);
    b.is(c(0));
  }
  return b.done();
}

// U^5 and U^4 modulo 17 as Laurent polynomials in u.
Expr U5_mod17() {
  return laurent(cubic_u(), {{1, 0, -5}, {2, 1, -4}, {5, 2, -3}, {5, 3, -2}, {12, 4, -1}, {4, 5, 0}, {6, 6, 1},
                             {10, 7, 2}, {2, 8, 3}, {9, 9, 4}, {2, 10, 5}, {14, 11, 6}, {5, 12, 7}, {2, 13, 8},
                             {4, 15, 10}});
}
Expr U4_mod17() {
  return laurent(cubic_u(), {{1, 0, -4}, {5, 1, -3}, {3, 2, -2}, {10, 3, -1}, {5, 4, 0}, {7, 5, 1}, {4, 6, 2},
                             {2, 7, 3}, {14, 8, 4}, {1, 9, 5}, {14, 10, 6}, {1, 12, 8}});
}
Expr vpoly(std::int64_t c1) {
  const Expr v = cubic_v();
  return 5 * pow(v, -3) + c1 * q(1) + 2 * q(2) * pow(v, 3) + 14 * q(3) * pow(v, 6);
}
Expr cube_in_eta() { return F({{1, 12}, {3, -12}}) + 27 * q(1); }

ProofChain chain_81_17() {
  ChainBuilder b("b81-17-mod17", "B_{81,17} modulo 17", {"b81-17"}, F({{81, 1}, {17, 1}, {1, -2}}), 630);
  b.reduce(17);
  b.is(F({{81, 1}, {1, 15}}));
  b.sub({"cubic-f1-cubed"});
  b.is(F({{81, 1}, {9, 15}}) * pow(U(), 5));
  b.is(F({{81, 1}, {9, 15}}) * U5_mod17());
  b.take(2, 3);
  const Expr P = F({{27, 1}, {3, 15}});
  b.is(P * vpoly(4));
  b.is(P * (5 * V3() + 12 * q(1)));
  b.sub({"cubic-v"});
  b.is(P * (5 * cube_in_eta() + 12 * q(1)));
  b.is(5 * F({{1, 12}, {27, 1}, {3, 3}}) + 11 * q(1) * P);
  b.sub({"cubic-f1-cubed"});
  b.is(5 * F({{9, 12}, {27, 1}, {3, 3}}) * U4_mod17() + 11 * q(1) * P);
  b.take(1, 3);
  const Expr W = F({{3, 12}, {9, 1}, {1, 3}});
  b.is(5 * W * vpoly(5) + 11 * F({{9, 1}, {1, 15}}));
  b.is(5 * W * (5 * V3() + 13 * q(1)) + 11 * F({{9, 1}, {1, 15}}));
  b.sub({"cubic-v"});
  b.is(5 * W * (5 * cube_in_eta() + 13 * q(1)) + 11 * F({{9, 1}, {1, 15}}));
  b.is(2 * F({{9, 1}, {1, 15}}) + 9 * q(1) * W);
  b.sub({"cubic-f1-cubed"});
  b.is(2 * F({{9, 16}}) * U5_mod17() + 9 * F({{3, 12}, {9, 4}}) * U() * q(1));
  b.take(2, 3);
  b.is(2 * F({{3, 16}}) * vpoly(4) + 7 * F({{1, 12}, {3, 4}}));
  b.is(2 * F({{3, 16}}) * (5 * V3() + 12 * q(1)) + 7 * F({{1, 12}, {3, 4}}));
  b.sub({"cubic-v"});
  b.is(2 * F({{3, 16}}) * (5 * cube_in_eta() + 12 * q(1)) + 7 * F({{1, 12}, {3, 4}}));
  const auto last = b.is(5 * q(1) * F({{3, 16}}));
  b.take(1, 3);
  b.is(5 * F({{1, 16}}));
  for (std::size_t r : {2u, 0u}) {
    b.recall(last);
    b.ext(r, 3);
    b.is(c(0));
  }
  return b.done();
}

ProofChain chain_17() {
  ChainBuilder b("b17-mod17", "17-regular partitions modulo 17", {"b17"}, F({{17, 1}, {1, -1}}), 840);
  b.reduce(17);
  const auto gen = b.is(F({{1, 16}}));
  b.take(2, 4);
  const auto at4n2 = b.is(2 * F({{1, 16}}) + 9 * q(1) * F({{2, 24}, {1, -8}}));
  b.combine({{2, at4n2}, {13, gen}});
  b.is(q(1) * F({{2, 24}, {1, -8}}));
  b.sub({"inv-f1-4"});
  const auto squared = b.is(q(1) * F({{2, 24}}) * pow(inv_f1_4(), 2));
  b.take(0, 2);
  const auto even = b.is(8 * q(1) * F({{2, 16}}));
  b.recall(squared);
  b.take(1, 2);
  const Expr tail = 16 * q(1) * F({{1, 4}, {2, 4}, {4, 8}});
  // The printed leading term has f_2^20; expanding the square gives f_2^28.
  b.is(F({{2, 20}, {1, -4}, {4, -8}}) + tail, true);
  b.recall(squared);
  b.take(1, 2);
  const Expr odd = F({{2, 28}, {1, -4}, {4, -8}}) + tail;
  b.is(odd);
  b.recall(gen);
  b.take(1, 2);
  b.is(odd);
  b.recall(even);
  b.ext(0, 2);
  b.is(c(0));
  b.recall(even);
  b.take(1, 2);
  b.is(8 * F({{1, 16}}));
  return b.done();
}

Expr B4sq() {
  return F({{4, 28}, {2, -28}, {8, -8}}) + 8 * q(1) * F({{4, 16}, {2, -24}}) +
         16 * q(2) * F({{4, 4}, {8, 8}, {2, -20}});
}

ProofChain chain_2_8() {
  ChainBuilder b("b2-8-mod11", "B_{2,8} modulo 11", {"b2-8"}, F({{2, 1}, {8, 1}, {1, -2}}), 450);
  b.is(F({{2, 1}, {8, 1}, {1, -2}}));
  b.sub({"inv-f1-sq"});
  b.is(F({{2, 1}, {8, 1}}) * inv_f1_sq());
  b.take(1, 2);
  b.is(2 * F({{2, 2}, {8, 2}, {1, -4}}));
  b.sub({"inv-f1-4"});
  b.is(2 * F({{2, 2}, {8, 2}}) * inv_f1_4());
  b.take(1, 2);
  b.is(8 * F({{2, 2}, {4, 6}, {1, -8}}));
  b.sub({"inv-f1-4"});
  b.is(8 * F({{2, 2}, {4, 6}}) * pow(inv_f1_4(), 2));
  b.is(8 * F({{2, 2}, {4, 6}}) * B4sq());
  b.take(1, 2);
  b.is(64 * F({{2, 22}, {1, -22}}));
  b.reduce(11);
  b.is(9 * F({{22, 2}, {11, -2}}));
  return b.done();
}

Registry make_builtin() {
  Registry reg;
  add_identities(reg);
  reg.add(chain_3_7());
  reg.add(chain_9_5());
  reg.add(chain_5_11());
  reg.add(chain_5_13());
  reg.add(chain_81_17());
  reg.add(chain_17());
  reg.add(chain_2_8());
  return reg;
}

}  // namespace

const Registry& builtin_registry() {
  static const Registry reg = make_builtin();
  return reg;
}

}  // namespace qbip
