#include "qbip/qexpr.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace qbip {

struct Expr::Node {
  NodeKind kind = NodeKind::Const;
  std::int64_t value = 0;
  std::vector<std::int64_t> params;
  std::vector<Expr> children;
  std::vector<std::int64_t> weights;
  std::string alias;
  std::string key;
};

namespace {

bool is_eta_power(const Expr& e) {
  if (!e.alias().empty()) return false;
  if (e.kind() == NodeKind::Eta) return true;
  return e.kind() == NodeKind::Pow && e.children()[0].kind() == NodeKind::Eta &&
         e.children()[0].alias().empty();
}

std::string render(const Expr::Node& n) {
  if (!n.alias.empty()) return n.alias;
  std::ostringstream os;
  switch (n.kind) {
    case NodeKind::Const:
      os << n.value;
      break;
    case NodeKind::Q:
      os << "(q " << n.value << ")";
      break;
    case NodeKind::Pochhammer:
      os << "(poch " << n.params[0] << " " << n.params[1] << ")";
      break;
    case NodeKind::Eta:
      os << "(f " << n.params[0] << ")";
      break;
    case NodeKind::Phi:
      os << "(phi " << n.params[0] << ")";
      break;
    case NodeKind::Psi:
      os << "(psi " << n.params[0] << ")";
      break;
    case NodeKind::Theta:
      os << "(theta " << n.params[0] << " " << n.params[1] << " " << n.params[2] << " "
         << n.params[3] << ")";
      break;
    case NodeKind::Mul: {
      bool etaq = true;
      for (const auto& c : n.children) etaq = etaq && is_eta_power(c);
      if (etaq) {
        os << "(etaq";
        for (const auto& c : n.children) {
          if (c.kind() == NodeKind::Eta) {
            os << " " << c.params()[0] << " 1";
          } else {
            os << " " << c.children()[0].params()[0] << " " << c.value();
          }
        }
        os << ")";
      } else {
        os << "(mul";
        for (const auto& c : n.children) os << " " << c.key();
        os << ")";
      }
      break;
    }
    case NodeKind::Pow:
      os << "(pow " << n.children[0].key() << " " << n.value << ")";
      break;
    case NodeKind::Sum:
      os << "(sum";
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        os << " (" << n.weights[i] << " " << n.children[i].key() << ")";
      }
      os << ")";
      break;
    case NodeKind::Dilate:
      os << "(dil " << n.children[0].key() << " " << n.value << ")";
      break;
  }
  return os.str();
}

}  // namespace

class ExprFactory {
 public:
  static Expr make(Expr::Node n) {
    n.key = render(n);
    return Expr(std::make_shared<const Expr::Node>(std::move(n)));
  }
  static const Expr::Node& node(const Expr& e) {
    if (!e.node_) throw Error(Errc::invalid_argument, "empty expression");
    return *e.node_;
  }
};

NodeKind Expr::kind() const { return ExprFactory::node(*this).kind; }
std::int64_t Expr::value() const { return ExprFactory::node(*this).value; }
const std::vector<std::int64_t>& Expr::params() const { return ExprFactory::node(*this).params; }
const std::vector<Expr>& Expr::children() const { return ExprFactory::node(*this).children; }
const std::vector<std::int64_t>& Expr::weights() const { return ExprFactory::node(*this).weights; }
const std::string& Expr::alias() const { return ExprFactory::node(*this).alias; }
const std::string& Expr::key() const { return ExprFactory::node(*this).key; }

Expr constant(std::int64_t c) {
  Expr::Node n;
  n.kind = NodeKind::Const;
  n.value = c;
  return ExprFactory::make(std::move(n));
}

Expr qpow(std::int64_t e) {
  if (e < 0) throw Error(Errc::invalid_argument, "q exponent must be >= 0");
  Expr::Node n;
  n.kind = NodeKind::Q;
  n.value = e;
  return ExprFactory::make(std::move(n));
}

Expr pochhammer(std::int64_t a, std::int64_t m) {
  if (m < 1 || a < 1 || a > m) {
    throw Error(Errc::invalid_argument, "pochhammer (q^a;q^m) needs 1 <= a <= m");
  }
  Expr::Node n;
  n.kind = NodeKind::Pochhammer;
  n.params = {a, m};
  return ExprFactory::make(std::move(n));
}

namespace {

Expr single_param(NodeKind kind, std::int64_t k, const char* what) {
  if (k < 1) throw Error(Errc::invalid_argument, std::string(what) + " index must be positive");
  Expr::Node n;
  n.kind = kind;
  n.params = {k};
  return ExprFactory::make(std::move(n));
}

}  // namespace

Expr eta(std::int64_t k) { return single_param(NodeKind::Eta, k, "f_k"); }
Expr phi(std::int64_t k) { return single_param(NodeKind::Phi, k, "phi"); }
Expr psi(std::int64_t k) { return single_param(NodeKind::Psi, k, "psi"); }

Expr theta(int sa, std::int64_t ua, int sb, std::int64_t ub) {
  if ((sa != 1 && sa != -1) || (sb != 1 && sb != -1)) {
    throw Error(Errc::invalid_argument, "theta signs must be +1 or -1");
  }
  if (ua < 1 || ub < 1) throw Error(Errc::invalid_argument, "theta exponents must be positive");
  Expr::Node n;
  n.kind = NodeKind::Theta;
  n.params = {sa, ua, sb, ub};
  return ExprFactory::make(std::move(n));
}

Expr product(std::vector<Expr> factors) {
  Expr::Node n;
  n.kind = NodeKind::Mul;
  n.children = std::move(factors);
  return ExprFactory::make(std::move(n));
}

Expr power(const Expr& base, std::int64_t e) {
  Expr::Node n;
  n.kind = NodeKind::Pow;
  n.value = e;
  n.children = {base};
  return ExprFactory::make(std::move(n));
}

Expr sum(std::vector<WeightedTerm> terms) {
  Expr::Node n;
  n.kind = NodeKind::Sum;
  for (auto& t : terms) {
    n.weights.push_back(t.weight);
    n.children.push_back(std::move(t.expr));
  }
  return ExprFactory::make(std::move(n));
}

Expr dilation(const Expr& e, std::int64_t k) {
  if (k < 1) throw Error(Errc::invalid_argument, "dilation factor must be positive");
  Expr::Node n;
  n.kind = NodeKind::Dilate;
  n.value = k;
  n.children = {e};
  return ExprFactory::make(std::move(n));
}

Expr eta_quotient(const std::vector<std::pair<std::int64_t, std::int64_t>>& factors) {
  std::vector<Expr> parts;
  for (auto [k, e] : factors) {
    if (e == 0) continue;
    parts.push_back(e == 1 ? eta(k) : power(eta(k), e));
  }
  return product(std::move(parts));
}

Expr eta_quotient(std::initializer_list<std::pair<std::int64_t, std::int64_t>> factors) {
  return eta_quotient(std::vector<std::pair<std::int64_t, std::int64_t>>(factors));
}

Expr named(std::string name, const Expr& expansion) {
  Expr::Node n = ExprFactory::node(expansion);
  n.alias = std::move(name);
  return ExprFactory::make(std::move(n));
}

Expr rr_S() {
  static const Expr s = named(
      "S", product({pochhammer(5, 25), pochhammer(20, 25), power(pochhammer(10, 25), -1),
                    power(pochhammer(15, 25), -1)}));
  return s;
}

Expr rr_S13() {
  static const Expr s = named("S13", dilation(rr_S(), 13));
  return s;
}

Expr cubic_u() {
  static const Expr u = named("u", eta_quotient({{3, 1}, {18, 3}, {6, -1}, {9, -3}}));
  return u;
}

Expr cubic_v() {
  static const Expr v = named("v", eta_quotient({{1, 1}, {6, 3}, {2, -1}, {3, -3}}));
  return v;
}

std::string to_string(const Expr& e) { return e.key(); }

// ---------------------------------------------------------------------------
// Parser

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  Expr parse_all() {
    Expr e = parse();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(Errc::parse, "qexpr parse error at offset " + std::to_string(pos_) + ": " + msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool peek(char c) {
    skip_ws();
    return pos_ < s_.size() && s_[pos_] == c;
  }

  void expect(char c) {
    if (!peek(c)) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  std::string_view word() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < s_.size() && !std::isspace(static_cast<unsigned char>(s_[pos_])) &&
           s_[pos_] != '(' && s_[pos_] != ')') {
      ++pos_;
    }
    if (start == pos_) fail("expected a token");
    return s_.substr(start, pos_ - start);
  }

  static bool looks_integer(std::string_view w) {
    if (w.empty()) return false;
    std::size_t i = (w[0] == '-' || w[0] == '+') ? 1 : 0;
    if (i == w.size()) return false;
    for (; i < w.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(w[i]))) return false;
    }
    return true;
  }

  std::int64_t integer() {
    auto w = word();
    if (!looks_integer(w)) fail("expected an integer, got '" + std::string(w) + "'");
    if (w[0] == '+') w.remove_prefix(1);
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || p != w.data() + w.size()) fail("integer out of range");
    return v;
  }

  Expr parse() {
    if (!peek('(')) {
      auto w = word();
      if (looks_integer(w)) {
        pos_ -= w.size();
        return constant(integer());
      }
      if (w == "S") return rr_S();
      if (w == "S13") return rr_S13();
      if (w == "u") return cubic_u();
      if (w == "v") return cubic_v();
      fail("unknown name '" + std::string(w) + "'");
    }
    expect('(');
    std::string op(word());
    Expr out;
    if (op == "q") {
      out = qpow(integer());
    } else if (op == "poch") {
      auto a = integer();
      out = pochhammer(a, integer());
    } else if (op == "f") {
      out = eta(integer());
    } else if (op == "phi") {
      out = phi(integer());
    } else if (op == "psi") {
      out = psi(integer());
    } else if (op == "theta") {
      auto sa = integer();
      auto ua = integer();
      auto sb = integer();
      auto ub = integer();
      out = theta(static_cast<int>(sa), ua, static_cast<int>(sb), ub);
    } else if (op == "etaq") {
      std::vector<std::pair<std::int64_t, std::int64_t>> fs;
      while (!peek(')')) {
        auto k = integer();
        fs.emplace_back(k, integer());
      }
      out = eta_quotient(fs);
    } else if (op == "mul") {
      std::vector<Expr> cs;
      while (!peek(')')) cs.push_back(parse());
      out = product(std::move(cs));
    } else if (op == "pow") {
      auto base = parse();
      out = power(base, integer());
    } else if (op == "sum") {
      std::vector<WeightedTerm> ts;
      while (!peek(')')) {
        expect('(');
        auto w = integer();
        ts.push_back({w, parse()});
        expect(')');
      }
      out = sum(std::move(ts));
    } else if (op == "dil") {
      auto child = parse();
      out = dilation(child, integer());
    } else {
      fail("unknown operator '" + op + "'");
    }
    expect(')');
    return out;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse_expr(std::string_view text) {
  try {
    return Parser(text).parse_all();
  } catch (const Error& e) {
    if (e.code() == Errc::parse) throw;
    throw Error(Errc::parse, std::string("qexpr parse error: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

// In-place multiplication by (1 + c q^t) for c = +1 or -1.
void times_binomial(std::vector<mpz_class>& z, std::size_t t, int c) {
  for (std::size_t n = z.size() - 1; n >= t; --n) {
    if (c > 0) z[n] += z[n - t];
    else z[n] -= z[n - t];
    if (n == t) break;
  }
}

void times_binomial(std::vector<std::uint64_t>& r, std::size_t t, int c, std::uint64_t m) {
  for (std::size_t n = r.size() - 1; n >= t; --n) {
    std::uint64_t x = r[n], y = r[n - t];
    if (c > 0) {
      std::uint64_t s = x + y;
      r[n] = (s >= m || s < x) ? s - m : s;
    } else {
      r[n] = x >= y ? x - y : x + (m - y);
    }
    if (n == t) break;
  }
}

// Product of (1 + sign(j) q^(first + j*step)) over j >= 0 with exponent <= order.
struct BinomialFactors {
  std::vector<std::pair<std::size_t, int>> factors;
};

Series product_of_binomials(const std::vector<std::pair<std::size_t, int>>& factors, CoeffRing ring,
                            std::size_t order) {
  if (ring.exact()) {
    std::vector<mpz_class> z(order + 1, mpz_class(0));
    z[0] = 1;
    for (auto [t, c] : factors) {
      if (t == 0 || t > order) continue;
      times_binomial(z, t, c);
    }
    return Series::from_integers(ring, std::span<const mpz_class>(z));
  }
  std::vector<std::uint64_t> r(order + 1, 0);
  r[0] = 1 % ring.modulus();
  for (auto [t, c] : factors) {
    if (t == 0 || t > order) continue;
    times_binomial(r, t, c, ring.modulus());
  }
  return Series::from_residues(ring, std::move(r));
}

}  // namespace

Series pochhammer_product(std::int64_t a, std::int64_t m, CoeffRing ring, std::size_t order) {
  if (a < 1 || m < 1) throw Error(Errc::invalid_argument, "pochhammer needs positive a, m");
  std::vector<std::pair<std::size_t, int>> fs;
  for (auto t = static_cast<std::size_t>(a); t <= order; t += static_cast<std::size_t>(m)) {
    fs.emplace_back(t, -1);
  }
  return product_of_binomials(fs, ring, order);
}

Series theta_product(int sa, std::int64_t ua, int sb, std::int64_t ub, CoeffRing ring,
                     std::size_t order) {
  if (ua < 1 || ub < 1) throw Error(Errc::invalid_argument, "theta exponents must be positive");
  const int sab = sa * sb;
  const auto w = static_cast<std::size_t>(ua + ub);
  std::vector<std::pair<std::size_t, int>> fs;
  // (-a; ab)_inf = prod_{j>=0} (1 + sa * sab^j q^(ua + j w)), likewise for b.
  int sign = 1;
  for (auto t = static_cast<std::size_t>(ua); t <= order; t += w, sign *= sab) fs.emplace_back(t, sa * sign);
  sign = 1;
  for (auto t = static_cast<std::size_t>(ub); t <= order; t += w, sign *= sab) fs.emplace_back(t, sb * sign);
  // (ab; ab)_inf = prod_{j>=1} (1 - sab^j q^(j w)).
  sign = sab;
  for (std::size_t t = w; t <= order; t += w, sign *= sab) fs.emplace_back(t, -sign);
  return product_of_binomials(fs, ring, order);
}

Series theta_sum(int sa, std::int64_t ua, int sb, std::int64_t ub, CoeffRing ring,
                 std::size_t order) {
  if (ua < 1 || ub < 1) throw Error(Errc::invalid_argument, "theta exponents must be positive");
  std::vector<mpz_class> z(order + 1, mpz_class(0));
  // n-th term: sa^(n(n+1)/2) sb^(n(n-1)/2) q^(ua n(n+1)/2 + ub n(n-1)/2), n in Z.
  auto add_term = [&](std::int64_t n) -> bool {
    const std::int64_t tp = n * (n + 1) / 2;
    const std::int64_t tm = n * (n - 1) / 2;
    const std::int64_t e = ua * tp + ub * tm;
    if (e > static_cast<std::int64_t>(order)) return false;
    int s = 1;
    if (sa < 0 && (tp % 2 != 0)) s = -s;
    if (sb < 0 && (tm % 2 != 0)) s = -s;
    z[static_cast<std::size_t>(e)] += s;
    return true;
  };
  for (std::int64_t n = 0; add_term(n); ++n) {
  }
  for (std::int64_t n = -1; add_term(n); --n) {
  }
  return Series::from_integers(ring, std::span<const mpz_class>(z));
}

Series Evaluator::operator()(const Expr& e, std::size_t order) {
  auto it = memo_.find(e.key());
  if (it != memo_.end() && it->second.order() >= order) {
    return it->second.order() == order ? it->second : it->second.truncate(order);
  }
  Series s = compute(e, order);
  if (it != memo_.end()) {
    it->second = s;
  } else {
    memo_.emplace(e.key(), s);
  }
  return s;
}

Series Evaluator::compute(const Expr& e, std::size_t order) {
  const auto& p = e.params();
  switch (e.kind()) {
    case NodeKind::Const:
      return Series::constant(ring_, order, mpz_class(static_cast<long>(e.value())));
    case NodeKind::Q:
      return Series::monomial(ring_, order, static_cast<std::size_t>(e.value()));
    case NodeKind::Pochhammer:
      return pochhammer_product(p[0], p[1], ring_, order);
    case NodeKind::Eta:
      return pochhammer_product(p[0], p[0], ring_, order);
    case NodeKind::Phi:
      return theta_product(1, p[0], 1, p[0], ring_, order);
    case NodeKind::Psi:
      return theta_product(1, p[0], 1, 3 * p[0], ring_, order);
    case NodeKind::Theta:
      return theta_product(static_cast<int>(p[0]), p[1], static_cast<int>(p[2]), p[3], ring_, order);
    case NodeKind::Mul: {
      Series acc = Series::one(ring_, order);
      bool first = true;
      for (const auto& c : e.children()) {
        Series s = (*this)(c, order);
        acc = first ? s : mul(acc, s);
        first = false;
      }
      return acc;
    }
    case NodeKind::Pow: {
      Series base = (*this)(e.children()[0], order);
      try {
        return pow(base, e.value());
      } catch (const Error& err) {
        if (err.code() != Errc::not_unit) throw;
        throw Error(Errc::not_unit, std::string(err.what()) + " in " + e.key());
      }
    }
    case NodeKind::Sum: {
      Series acc = Series::zero(ring_, order);
      const auto& ws = e.weights();
      const auto& cs = e.children();
      for (std::size_t i = 0; i < cs.size(); ++i) {
        acc = add(acc, scalar_mul((*this)(cs[i], order), mpz_class(static_cast<long>(ws[i]))));
      }
      return acc;
    }
    case NodeKind::Dilate: {
      const auto k = static_cast<std::size_t>(e.value());
      const std::size_t inner = (order + k - 1) / k;
      return dilate((*this)(e.children()[0], inner), k).truncate(order);
    }
  }
  throw Error(Errc::invalid_argument, "unknown expression kind");
}

Series eval(const Expr& e, CoeffRing ring, std::size_t order) {
  Evaluator ev(ring);
  return ev(e, order);
}

// ---------------------------------------------------------------------------
// Builder shorthands

namespace dsl {

namespace {

std::vector<WeightedTerm> terms_of(const Expr& e) {
  if (e.kind() == NodeKind::Sum && e.alias().empty()) {
    std::vector<WeightedTerm> ts;
    for (std::size_t i = 0; i < e.children().size(); ++i) {
      ts.push_back({e.weights()[i], e.children()[i]});
    }
    return ts;
  }
  return {{1, e}};
}

std::vector<Expr> factors_of(const Expr& e) {
  if (e.kind() == NodeKind::Mul && e.alias().empty()) return e.children();
  return {e};
}

}  // namespace

Expr operator*(const Expr& a, const Expr& b) {
  auto fs = factors_of(a);
  auto fb = factors_of(b);
  fs.insert(fs.end(), fb.begin(), fb.end());
  return product(std::move(fs));
}

Expr operator*(std::int64_t k, const Expr& a) {
  if (a.kind() == NodeKind::Sum && a.alias().empty() && a.children().size() == 1) {
    return sum({{k * a.weights()[0], a.children()[0]}});
  }
  return sum({{k, a}});
}

Expr operator+(const Expr& a, const Expr& b) {
  auto ts = terms_of(a);
  auto tb = terms_of(b);
  ts.insert(ts.end(), tb.begin(), tb.end());
  return sum(std::move(ts));
}

Expr operator-(const Expr& a) { return (-1) * a; }

Expr operator-(const Expr& a, const Expr& b) { return a + (-1) * b; }

Expr laurent(const Expr& x, std::initializer_list<LaurentTerm> terms) {
  std::vector<WeightedTerm> ts;
  for (const auto& t : terms) {
    std::vector<Expr> fs;
    if (t.qexp != 0) fs.push_back(qpow(t.qexp));
    if (t.xexp == 1) fs.push_back(x);
    else if (t.xexp != 0) fs.push_back(power(x, t.xexp));
    Expr term = fs.empty() ? constant(1) : (fs.size() == 1 ? fs[0] : product(std::move(fs)));
    ts.push_back({t.coef, term});
  }
  return sum(std::move(ts));
}

}  // namespace dsl

}  // namespace qbip
