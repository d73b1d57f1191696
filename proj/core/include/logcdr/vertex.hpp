#pragma once

#include <map>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "logcdr/errors.hpp"
#include "logcdr/rational.hpp"

namespace logcdr::vertex {

/* Generator field of the rank-d bcbeta-gamma system, possibly derived.
 * gamma/beta are bosonic, c/b fermionic; weights 0,1,0,1 plus the
 * derivative order. */
enum class Kind { gamma, beta, c, b };  // also the canonical kind order

struct FieldSymbol {
  Kind kind = Kind::gamma;
  int index = 1;  // 1-based
  int der = 0;    // derivative order

  bool odd() const { return kind == Kind::c || kind == Kind::b; }
  int weight() const {
    return der + (kind == Kind::beta || kind == Kind::b ? 1 : 0);
  }
  int fermion() const {
    return kind == Kind::c ? 1 : kind == Kind::b ? -1 : 0;
  }
  friend bool operator==(const FieldSymbol& x, const FieldSymbol& y) {
    return x.kind == y.kind && x.index == y.index && x.der == y.der;
  }
  friend bool operator<(const FieldSymbol& x, const FieldSymbol& y) {
    if (x.kind != y.kind) return x.kind < y.kind;
    if (x.index != y.index) return x.index < y.index;
    return x.der < y.der;
  }
  std::string str() const;
};

/* Basis monomial: a Laurent monomial in the underived gammas times a sorted
 * word of creation symbols, denoting the right-nested normally ordered
 * product of its factors in the stored order. Odd symbols appear at most
 * once; gamma symbols in the word carry der >= 1. */
struct VMonomial {
  std::map<int, int> gamma_exps;      // index -> exponent, never zero
  std::vector<FieldSymbol> symbols;   // canonically sorted

  int weight() const;
  int fermion() const;
  /* Filtration degree for the classical limit: every quantum contraction
   * lowers it by exactly two. */
  int quanta() const;
  int min_gamma_exp() const;
  bool parity_odd() const;

  friend bool operator==(const VMonomial& x, const VMonomial& y) {
    return x.gamma_exps == y.gamma_exps && x.symbols == y.symbols;
  }
  friend bool operator<(const VMonomial& x, const VMonomial& y) {
    if (x.gamma_exps != y.gamma_exps) return x.gamma_exps < y.gamma_exps;
    return x.symbols < y.symbols;
  }
  std::string str() const;
};

/* State of the vertex algebra: finite sum of basis monomials, tagged with
 * the ambient rank and localization so cross-system arithmetic is caught. */
class VState {
 public:
  VState() = default;
  VState(int rank, int localization) : rank_(rank), loc_(localization) {}

  int rank() const { return rank_; }
  int localization() const { return loc_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<VMonomial, Rational>& terms() const { return terms_; }

  void add_term(const VMonomial& m, const Rational& c);
  Rational coeff(const VMonomial& m) const;

  VState operator-() const;
  VState scaled(const Rational& c) const;
  friend VState operator+(const VState& x, const VState& y);
  friend VState operator-(const VState& x, const VState& y);
  VState& operator+=(const VState& o) { return *this = *this + o; }
  VState& operator-=(const VState& o) { return *this = *this - o; }
  friend bool operator==(const VState& x, const VState& y) {
    return (x - y).is_zero();
  }
  friend bool operator!=(const VState& x, const VState& y) {
    return !(x == y);
  }

  /* Maximum over monomials; zero state reports 0. */
  int max_weight() const;
  /* Defined only on homogeneous states. */
  int weight() const;
  int fermion() const;
  bool is_homogeneous() const;

  /* Terms of the given filtration degree. */
  VState quanta_part(int n) const;
  int max_quanta() const;
  /* Terms whose total gamma degree (sum of exponents and derived-gamma
   * symbols) stays within [lo, hi]. */
  VState gamma_window(int lo, int hi) const;

  std::string str() const;
  std::string key() const;  // compact canonical serialization

 private:
  friend class Engine;
  int rank_ = 0;
  int loc_ = 0;
  std::map<VMonomial, Rational> terms_;
};

/* Finitely supported lambda polynomial: coefficient of lambda^n/n! is the
 * n-th product. */
struct LambdaPolynomial {
  std::map<int, VState> coeffs;  // only nonzero entries
  std::string str() const;
};

/* The bracket engine. Pure apart from a memo table of monomial-level
 * products; the table is a cache (idempotent fills, guarded by a mutex,
 * safe under concurrent use). */
class Engine {
 public:
  Engine(int rank, int localization);

  int rank() const { return d_; }
  int localization() const { return r_; }

  VState zero() const { return VState(d_, r_); }
  VState vac() const;
  VState gamma(int i, int der = 0) const;
  VState beta(int i, int der = 0) const;
  VState c(int i, int der = 0) const;
  VState b(int i, int der = 0) const;
  /* gamma_i^e as a state; e < 0 requires i <= localization. */
  VState gamma_power(int i, int e) const;
  VState from_monomial(const VMonomial& m, const Rational& coeff) const;

  /* The translation operator. */
  VState derivative(const VState& v) const;
  VState derivative(const VState& v, int times) const;

  VState nth_product(const VState& a, const VState& b, int n);
  /* a_(-1)b, the normally ordered product. */
  VState nop(const VState& a, const VState& b) { return nth_product(a, b, -1); }
  LambdaPolynomial lambda_bracket(const VState& a, const VState& b);

  size_t memo_size() const;

 private:
  void validate(const VState& v) const;
  void validate_monomial(const VMonomial& m) const;
  VState np_mono(const VMonomial& a, const VState& b, int n);
  /* Single mode of the field D^der(kind_index) applied to a state. */
  VState symbol_mode(const FieldSymbol& s, int m, const VState& v) const;
  VState gen_mode(Kind k, int index, int m, const VState& v) const;
  /* Mode of the field gamma_i^{-1} (Wick expansion against beta_i). */
  VState gamma_inverse_mode(int i, int m, const VState& v) const;

  int d_;
  int r_;
  mutable std::shared_mutex memo_mutex_;
  std::unordered_map<std::string, VState> memo_;
};

/* L = D(gamma^i) beta_i + D(c^i) b_i, J = c^i b_i, Q = beta_i c^i,
 * G = D(gamma^i) b_i: the topological quartet of the system. */
struct Topological {
  VState L, J, Q, G;
};
Topological topological_generators(Engine& e);

/* Generating states of the subalgebra attached to the divisor
 * gamma_1...gamma_r: plain generators away from the divisor, and
 * {gamma_i, D(gamma_i)/gamma_i, gamma_i beta_i, c^i/gamma_i, gamma_i b_i}
 * along it. */
std::vector<VState> log_generators(Engine& e);

/* Membership in the span of iterated normally ordered products of
 * log generators and their derivatives, searched within explicit caps. */
enum class Verdict { yes, no, inconclusive };
struct SearchBound {
  int max_factors = 4;
  int max_derivative = 3;
};
Verdict is_logarithmic(Engine& e, const VState& s, const SearchBound& bound);

/* Supercommutative product of the underlying differential superalgebra:
 * the classical limit of the normally ordered product. */
VState classical_product(const VState& a, const VState& b);

struct CheckResult {
  bool equal = true;
  VState difference;  // lhs - rhs when not equal
};
CheckResult verify_identity(const VState& lhs, const VState& rhs);

/* Polynomial coordinate change gamma~^i = g^i(gamma) with truncated inverse
 * gamma^i = f^i(gamma~) computed to degree_cap. For i <= localization each
 * g^i must be gamma_i times a unit, so the divisor ideal is preserved.
 * States transform by substitution: gamma by g, c as one-forms, b as vector
 * fields, beta with the quadratic fermion correction; all gamma expansions
 * are truncated at total degree degree_cap. */
class CoordinateTransform {
 public:
  CoordinateTransform(Engine& e, std::vector<VState> g, int degree_cap);

  int degree_cap() const { return cap_; }
  const VState& gamma_image(int i) const;
  const VState& beta_image(int i) const;
  const VState& c_image(int i) const;
  const VState& b_image(int i) const;

  VState apply(const VState& s) const;

 private:
  VState substitute_gamma_part(const std::map<int, int>& exps) const;

  Engine* eng_;
  int cap_;
  std::vector<VState> g_;
  std::vector<VState> gamma_img_, beta_img_, c_img_, b_img_;
  /* Truncated images of gamma_i^{-1} for i <= localization. */
  std::vector<VState> gamma_inv_img_;
};

}  // namespace logcdr::vertex
