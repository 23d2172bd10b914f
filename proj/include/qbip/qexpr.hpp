#pragma once

// Expression trees over q-Pochhammer products, eta factors f_k, Ramanujan's
// theta functions and named composites, evaluated to truncated series.
//
// Expressions are immutable and cheap to copy (shared nodes). Every node has
// a canonical prefix-notation text form, used for serialization and as the
// memoization key during evaluation. The grammar is in docs/qexpr-grammar.md.

#include <cstdint>
#include <initializer_list>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qbip/series.hpp"

namespace qbip {

enum class NodeKind { Const, Q, Pochhammer, Eta, Phi, Psi, Theta, Mul, Pow, Sum, Dilate };

class Expr;

struct WeightedTerm;

class Expr {
 public:
  struct Node;

  Expr() = default;

  NodeKind kind() const;
  /// Const value, Q exponent, Pow exponent or Dilate factor.
  std::int64_t value() const;
  /// Atom parameters: (a, m) for Pochhammer, (k) for Eta/Phi/Psi, (sa, ua, sb, ub) for Theta.
  const std::vector<std::int64_t>& params() const;
  const std::vector<Expr>& children() const;
  /// Integer weights of a Sum, parallel to children().
  const std::vector<std::int64_t>& weights() const;
  /// Name of a composite (S, u, v, ...) or empty.
  const std::string& alias() const;
  /// Canonical text form.
  const std::string& key() const;

  bool valid() const { return static_cast<bool>(node_); }

  friend bool operator==(const Expr& a, const Expr& b) { return a.key() == b.key(); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;

  friend class ExprFactory;
};

struct WeightedTerm {
  std::int64_t weight;
  Expr expr;
};

// Constructors. Parameter checks happen here, not at evaluation.
Expr constant(std::int64_t c);
Expr qpow(std::int64_t e);
Expr pochhammer(std::int64_t a, std::int64_t m);
Expr eta(std::int64_t k);
Expr phi(std::int64_t k);
Expr psi(std::int64_t k);
Expr theta(int sa, std::int64_t ua, int sb, std::int64_t ub);
Expr product(std::vector<Expr> factors);
Expr power(const Expr& base, std::int64_t e);
Expr sum(std::vector<WeightedTerm> terms);
Expr dilation(const Expr& e, std::int64_t k);
/// Product of f_k^e over the given (k, e) pairs.
Expr eta_quotient(std::initializer_list<std::pair<std::int64_t, std::int64_t>> factors);
Expr eta_quotient(const std::vector<std::pair<std::int64_t, std::int64_t>>& factors);
/// Wrap an expansion under a composite name; the name is what prints.
Expr named(std::string name, const Expr& expansion);

/// Rogers-Ramanujan quotient at q^5:
/// (q^5;q^25)(q^20;q^25) / ((q^10;q^25)(q^15;q^25)).
Expr rr_S();
/// rr_S with q replaced by q^13.
Expr rr_S13();
/// f_3 f_18^3 / (f_6 f_9^3).
Expr cubic_u();
/// f_1 f_6^3 / (f_2 f_3^3).
Expr cubic_v();

std::string to_string(const Expr& e);
/// Parse the prefix text form. Throws Error(Errc::parse) on malformed input.
Expr parse_expr(std::string_view text);

/// Evaluates expressions in one ring, memoizing subtrees by key. Not
/// thread-safe; use one evaluator per task.
class Evaluator {
 public:
  explicit Evaluator(CoeffRing ring) : ring_(ring) {}

  CoeffRing ring() const { return ring_; }
  Series operator()(const Expr& e, std::size_t order);
  std::size_t memo_size() const { return memo_.size(); }

 private:
  Series compute(const Expr& e, std::size_t order);

  CoeffRing ring_;
  std::unordered_map<std::string, Series> memo_;
};

Series eval(const Expr& e, CoeffRing ring, std::size_t order);

/// Finite product (q^a; q^m)_inf truncated at the order.
Series pochhammer_product(std::int64_t a, std::int64_t m, CoeffRing ring, std::size_t order);
/// f(sa q^ua, sb q^ub) from its product form (-a;ab)(-b;ab)(ab;ab).
Series theta_product(int sa, std::int64_t ua, int sb, std::int64_t ub, CoeffRing ring,
                     std::size_t order);
/// f(sa q^ua, sb q^ub) from its bilateral sum.
Series theta_sum(int sa, std::int64_t ua, int sb, std::int64_t ub, CoeffRing ring,
                 std::size_t order);

namespace dsl {

// Shorthands used to write identities compactly.
inline Expr F(std::initializer_list<std::pair<std::int64_t, std::int64_t>> f) { return eta_quotient(f); }
inline Expr q(std::int64_t e = 1) { return qpow(e); }
inline Expr c(std::int64_t v) { return constant(v); }

Expr operator*(const Expr& a, const Expr& b);
Expr operator*(std::int64_t k, const Expr& a);
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr pow(const Expr& a, std::int64_t e) { return power(a, e); }

/// Sum of coef * q^qexp * x^xexp.
struct LaurentTerm {
  std::int64_t coef;
  std::int64_t qexp;
  std::int64_t xexp;
};
Expr laurent(const Expr& x, std::initializer_list<LaurentTerm> terms);

}  // namespace dsl

}  // namespace qbip
