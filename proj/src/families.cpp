// Built-in congruence families.

#include "qbip/congruences.hpp"

namespace qbip {

namespace {

mpz_class ipow(long base, unsigned long e) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(base), e);
  return r;
}

std::uint64_t pow_res(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1 % p;
  for (std::uint64_t i = 0; i < e; ++i) r = mul_mod(r, b % p, p);
  return r;
}

Instance inst(std::vector<std::pair<std::string, std::int64_t>> params, Term lhs, std::vector<Term> rhs,
              std::size_t n_max, std::string note = {}) {
  return Instance{std::move(params), std::move(lhs), std::move(rhs), n_max, std::move(note)};
}

Term t(const Source& s, AffineIndex idx, std::uint64_t coef = 1) { return Term{coef, s, std::move(idx)}; }

AffineIndex identity_map() { return affine(1, 0); }

CongruenceFamily family(std::string id, std::string title, std::string statement, std::uint64_t p,
                        std::vector<Instance> instances, std::string reading = {}) {
  return CongruenceFamily{std::move(id), std::move(title), std::move(statement), p, std::move(reading),
                          std::move(instances)};
}

void add_3_7(std::vector<CongruenceFamily>& out) {
  const Source B = Source::bipartite(3, 7);
  out.push_back(family("b3-7-16n5", "base relation mod 7", "B(16n+5) = 6B(4n+1) + 5B(n) mod 7", 7,
                       {inst({}, t(B, affine(16, 5)), {t(B, affine(4, 1), 6), t(B, identity_map(), 5)}, 5000)}));

  std::vector<Instance> rec;
  for (unsigned long m = 0; m <= 6; ++m) {
    const mpz_class s = ipow(4, m);
    rec.push_back(inst({{"m", m}}, t(B, affine(s, s - 1, 3)),
                       {t(B, affine(4, 1), seq_eval(sequence("E"), m, 7)),
                        t(B, identity_map(), seq_eval(sequence("e"), m, 7))},
                       200));
  }
  out.push_back(family("b3-7-recurrence", "4^m progressions mod 7",
                       "B(4^m n + (4^m-1)/3) = E_m B(4n+1) + e_m B(n) mod 7", 7, std::move(rec)));

  std::vector<Instance> per;
  for (unsigned long m = 0; m <= 2; ++m) {
    const mpz_class s = ipow(4, 7 * m);
    per.push_back(inst({{"m", m}}, t(B, affine(s, s - 1, 3)), {t(B, identity_map(), pow_res(3, m, 7))}, 100));
  }
  out.push_back(family("b3-7-period", "period 4^7 mod 7", "B(4^(7m) n + (4^(7m)-1)/3) = 3^m B(n) mod 7", 7,
                       std::move(per)));

  std::vector<Instance> zero;
  for (unsigned long m = 0; m <= 1; ++m) {
    zero.push_back(inst({{"m", m}}, t(B, affine(ipow(4, 7 * m + 7), 10 * ipow(4, 7 * m + 6) - 1, 3)), {}, 100));
  }
  out.push_back(family("b3-7-zero", "vanishing progression mod 7",
                       "B(4^(7m+7) n + (10*4^(7m+6)-1)/3) = 0 mod 7", 7, std::move(zero)));
}

void add_9_5(std::vector<CongruenceFamily>& out) {
  const Source B = Source::bipartite(9, 5);
  std::vector<Instance> per;
  const std::size_t n_for[] = {2000, 2000, 2};
  for (unsigned long m = 0; m <= 2; ++m) {
    const mpz_class s = ipow(5, 4 * m);
    per.push_back(inst({{"m", m}}, t(B, affine(s, s - 1, 2)), {t(B, identity_map(), pow_res(2, m, 3))}, n_for[m]));
  }
  out.push_back(family("b9-5-period", "period 5^4 mod 3", "B(5^(4m) n + (5^(4m)-1)/2) = 2^m B(n) mod 3", 3,
                       std::move(per)));

  std::vector<Instance> zero;
  for (unsigned long m = 0; m <= 1; ++m) {
    for (long k : {4, 5}) {
      zero.push_back(inst({{"m", m}, {"k", k}},
                          t(B, affine(ipow(5, 4 * m + 4), (2 * k + 1) * ipow(5, 4 * m + 3) - 1, 2)), {},
                          m == 0 ? 2000 : 2));
    }
  }
  out.push_back(family("b9-5-zero", "vanishing progressions mod 3",
                       "B(5^(4m+4) n + ((2k+1) 5^(4m+3) - 1)/2) = 0 mod 3, k = 4, 5", 3, std::move(zero)));
}

// Shared shape of the (5,11) and (5,13) families.
void add_5_q(std::vector<CongruenceFamily>& out, long q, std::int64_t a_num, std::int64_t den, std::int64_t c1,
             std::int64_t c2, const char* big, const char* small, std::uint64_t period_c, long zero_exp,
             std::vector<std::pair<long, long>> zero_k, std::string zero_note = {}) {
  const std::uint64_t p = static_cast<std::uint64_t>(q);
  const Source B = Source::bipartite(5, q);
  const std::string tag = "b5-" + std::to_string(q);
  const std::string ps = std::to_string(q);
  auto prog = [&](unsigned long e) { return affine(ipow(5, e), a_num * ipow(5, e) - a_num, den); };

  out.push_back(family(tag + "-625n", "base relation mod " + ps,
                       "B(625n + c) = " + std::to_string(c1) + " B(25n + c') + " + std::to_string(c2) + " B(n) mod " + ps,
                       p, {inst({}, t(B, prog(4)), {t(B, prog(2), c1), t(B, identity_map(), c2)}, 2000)}));

  std::vector<Instance> rec;
  const std::size_t n_for[] = {2000, 2000, 2000, 60, 2};
  for (unsigned long m = 0; m <= 4; ++m) {
    rec.push_back(inst({{"m", m}}, t(B, prog(2 * m)),
                       {t(B, prog(2), seq_eval(sequence(big), m, p)), t(B, identity_map(), seq_eval(sequence(small), m, p))},
                       n_for[m]));
  }
  out.push_back(family(tag + "-recurrence", "25^m progressions mod " + ps,
                       std::string("B(25^m n + c_m) = ") + big + "_m B(25n + c_1) + " + small + "_m B(n) mod " + ps, p,
                       std::move(rec)));

  const unsigned long per_e = static_cast<unsigned long>(zero_exp + 1);
  std::vector<Instance> per;
  for (unsigned long m = 0; m <= 1; ++m) {
    per.push_back(inst({{"m", m}}, t(B, prog(per_e * m)), {t(B, identity_map(), pow_res(period_c, m, p))}, 50));
  }
  out.push_back(family(tag + "-period", "period 5^" + std::to_string(per_e) + " mod " + ps,
                       "B(5^(" + std::to_string(per_e) + "m) n + c_m) = " + std::to_string(period_c) + "^m B(n) mod " + ps,
                       p, std::move(per)));

  // The vanishing statement: B(5^(e m + e) n + ((a k + b) 5^(e m + e - 1) - a_num) / den) = 0.
  std::vector<Instance> zero;
  for (unsigned long m = 0; m <= 1; ++m) {
    for (auto [k, coef] : zero_k) {
      const unsigned long e = per_e * m + per_e;
      zero.push_back(inst({{"m", m}, {"k", k}}, t(B, affine(ipow(5, e), coef * ipow(5, e - 1) - a_num, den)), {}, 50,
                          zero_note));
    }
  }
  out.push_back(family(tag + "-zero", "vanishing progressions mod " + ps,
                       "B(5^(" + std::to_string(per_e) + "m+" + std::to_string(per_e) + ") n + c_{m,k}) = 0 mod " + ps, p,
                       std::move(zero)));
}

void add_81_17(std::vector<CongruenceFamily>& out) {
  const Source B = Source::bipartite(81, 17);
  const Source b = Source::regular(17);
  std::vector<Instance> zero;
  for (long k : {2, 3}) zero.push_back(inst({{"k", k}}, t(B, affine(81, 27 * k + 23)), {}, 300));
  out.push_back(family("b81-17-zero", "vanishing progressions mod 17", "B(27(3n+k)+23) = 0 mod 17, k = 2, 3", 17,
                       std::move(zero)));
  out.push_back(family("b81-17-to-b17", "reduction to 17-regular partitions", "B(81n+50) = 5 b_17(n) mod 17", 17,
                       {inst({}, t(B, affine(81, 50)), {t(b, identity_map(), 5)}, 500)}));

  std::vector<Instance> rec;
  for (unsigned long k = 0; k <= 8; ++k) {
    const mpz_class s = ipow(4, k);
    rec.push_back(inst({{"k", k}}, t(b, affine(s, 2 * (s - 1), 3)),
                       {t(b, affine(4, 2), seq_eval(sequence("D"), k, 17)),
                        t(b, identity_map(), seq_eval(sequence("d"), k, 17))},
                       20));
  }
  out.push_back(family("b17-recurrence", "4^k progressions mod 17",
                       "b_17(4^k n + 2(4^k-1)/3) = D(k) b_17(4n+2) + d(k) b_17(n) mod 17", 17, std::move(rec)));

  const mpz_class p8 = ipow(4, 8);
  const mpz_class p9 = ipow(4, 9);
  out.push_back(family("b17-zero", "vanishing progression mod 17", "b_17(4^9 n + 2(4^8-1)/3) = 0 mod 17", 17,
                       {inst({}, t(b, affine(p9, 2 * (p8 - 1), 3)), {}, 8)}));
  out.push_back(family("b17-period", "period 4^9 mod 17", "b_17(4^9 n + 2(4^9-1)/3) = 8 b_17(n) mod 17", 17,
                       {inst({}, t(b, affine(p9, 2 * (p9 - 1), 3)), {t(b, identity_map(), 8)}, 8)}));
  out.push_back(family("b17-odd", "odd progression mod 17", "b_17(2*4^8 n + (5*4^8-2)/3) = b_17(2n+1) mod 17", 17,
                       {inst({}, t(b, affine(2 * p8, 5 * p8 - 2, 3)), {t(b, affine(2, 1))}, 8)}));

  // B(81 N + 50) is read as 5 b_17(N) once N outgrows the direct table.
  const std::string via = "left side evaluated as 5 b_17(N) with B(81N+50) = 5 b_17(N)";
  auto lhs_at = [&](const AffineIndex& N, unsigned long m) {
    if (m == 0) return t(B, affine(81 * N.scale, 81 * N.offset + 50));
    return t(b, N, 5);
  };

  {
    std::vector<Instance> printed;
    for (unsigned long m = 0; m <= 1; ++m) {
      const auto N = affine(ipow(4, 9 * m), 2 * ipow(4, 8 * m) - 2, 3);
      printed.push_back(inst({{"m", m}}, lhs_at(N, m), {}, 8, m ? via : std::string{}));
    }
    out.push_back(family("b81-17-thm-zero-printed", "vanishing progression mod 17, exponents as printed",
                         "B(81*4^(9m) n + 81(2*4^(8m)-2)/3 + 50) = 0 mod 17", 17, std::move(printed), "as printed"));
    std::vector<Instance> shifted;
    for (unsigned long m = 0; m <= 1; ++m) {
      const auto N = affine(ipow(4, 9 * m + 9), 2 * ipow(4, 9 * m + 8) - 2, 3);
      shifted.push_back(inst({{"m", m}}, t(b, N, 5), {}, 8, via));
    }
    out.push_back(family("b81-17-thm-zero-shifted", "vanishing progression mod 17, exponents 9m+9 and 9m+8",
                         "B(81*4^(9m+9) n + 81(2*4^(9m+8)-2)/3 + 50) = 0 mod 17", 17, std::move(shifted),
                         "exponents 9m+9, 9m+8"));
  }

  {
    std::vector<Instance> per;
    for (unsigned long m = 0; m <= 1; ++m) {
      const auto N = affine(ipow(4, 9 * m), 2 * ipow(4, 9 * m) - 2, 3);
      per.push_back(inst({{"m", m}}, lhs_at(N, m), {t(B, affine(81, 50), pow_res(8, m, 17))}, m ? 8 : 100,
                         m ? via : std::string{}));
    }
    out.push_back(family("b81-17-thm-period", "period 4^9 on 81n+50 mod 17",
                         "B(81*4^(9m) n + 81(2*4^(9m)-2)/3 + 50) = 8^m B(81n+50) mod 17", 17, std::move(per)));
  }

  for (std::uint64_t c : {5u, 1u}) {
    std::vector<Instance> odd;
    for (unsigned long m = 0; m <= 1; ++m) {
      const auto N = affine(2 * ipow(4, 8 * m), 5 * ipow(4, 8 * m) - 2, 3);
      odd.push_back(inst({{"m", m}}, lhs_at(N, m), {t(B, affine(162, 131), pow_res(c, m, 17))}, m ? 8 : 100,
                         m ? via : std::string{}));
    }
    const bool printed = c == 5;
    out.push_back(family(printed ? "b81-17-thm-odd-printed" : "b81-17-thm-odd-unit",
                         printed ? "odd progression mod 17, factor as printed" : "odd progression mod 17, factor 1",
                         printed ? "B(162*4^(8m) n + 81(5*4^(8m)-2)/3 + 50) = 5^m B(162n+131) mod 17"
                                 : "B(162*4^(8m) n + 81(5*4^(8m)-2)/3 + 50) = B(162n+131) mod 17",
                         17, std::move(odd), printed ? "factor 5^m" : "factor 1"));
  }
}

void add_small(std::vector<CongruenceFamily>& out) {
  const Source B28 = Source::bipartite(2, 8);
  std::vector<Instance> x;
  for (long k = 1; k <= 10; ++k) x.push_back(inst({{"k", k}}, t(B28, affine(88, 8 * k + 7)), {}, 500));
  out.push_back(family("b2-8-zero", "vanishing progressions mod 11", "B(8(11n+k)+7) = 0 mod 11, k = 1..10", 11,
                       std::move(x)));

  const Source B311 = Source::bipartite(3, 11);
  std::vector<Instance> d;
  for (unsigned long a = 2; a <= 4; ++a) {
    d.push_back(inst({{"alpha", a}}, t(B311, affine(ipow(3, a), 5 * ipow(3, a - 1) - 1, 2)), {}, a == 4 ? 1000 : 3000));
  }
  out.push_back(family("b3-11-zero", "vanishing progressions mod 11",
                       "B(3^alpha n + (5*3^(alpha-1)-1)/2) = 0 mod 11", 11, std::move(d)));
}

std::vector<CongruenceFamily> make_families() {
  std::vector<CongruenceFamily> out;
  add_3_7(out);
  add_9_5(out);
  // (5,11): offsets (7*5^e - 7)/12, constants A_m, a_m, period 5^12 with factor 2,
  // zero progressions with (12k+11) 5^(12m+11), k = 4, 5.
  add_5_q(out, 11, 7, 12, 1, 7, "A", "a", 2, 11, {{4, 12 * 4 + 11}, {5, 12 * 5 + 11}},
          "statement printed without n; read with n multiplying 5^(12m+12)");
  // (5,13): offsets (2*5^e - 2)/3, constants C_m, c_m, period 5^6 with factor 8,
  // zero progressions with (3k+1) 5^(6m+5), k = 1, 5.
  add_5_q(out, 13, 2, 3, 8, 1, "C", "c", 8, 5, {{1, 3 * 1 + 1}, {5, 3 * 5 + 1}});
  add_81_17(out);
  add_small(out);
  return out;
}

}  // namespace

const std::vector<CongruenceFamily>& builtin_families() {
  static const std::vector<CongruenceFamily> fams = make_families();
  return fams;
}

}  // namespace qbip
