#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "logcdr/errors.hpp"
#include "logcdr/rational.hpp"
#include "logcdr/series.hpp"

namespace logcdr::logjets {

/* Generator symbol of a (log) jet algebra: an unnormalized jet derivative
 * of a chart coordinate gamma_i or of a log symbol ell_i. */
struct JetSymbol {
  enum class Base { gamma, ell };
  Base base = Base::gamma;
  int index = 1;      // 1-based coordinate index
  int jet_order = 0;  // number of derivatives applied

  friend bool operator==(const JetSymbol& a, const JetSymbol& b) {
    return a.base == b.base && a.index == b.index && a.jet_order == b.jet_order;
  }
  friend bool operator<(const JetSymbol& a, const JetSymbol& b) {
    if (a.base != b.base) return a.base < b.base;
    if (a.index != b.index) return a.index < b.index;
    return a.jet_order < b.jet_order;
  }
  /* Contracting grading: jets count their order, ell symbols one more. */
  int weight() const {
    return jet_order + (base == Base::ell ? 1 : 0);
  }
  std::string str() const;
};

using JetMonomial = std::map<JetSymbol, int>;  // exponents, never zero

/* Exact polynomial in jet symbols. Negative exponents are representable but
 * only algebras constructed as localized variants produce or accept them. */
class DiffPoly {
 public:
  DiffPoly() = default;
  explicit DiffPoly(const Rational& c) {
    if (c != 0) terms_[JetMonomial{}] = c;
  }
  static DiffPoly symbol(const JetSymbol& s, int exponent = 1) {
    DiffPoly p;
    if (exponent != 0) p.terms_[JetMonomial{{s, exponent}}] = 1;
    else p.terms_[JetMonomial{}] = 1;
    return p;
  }

  bool is_zero() const { return terms_.empty(); }
  const std::map<JetMonomial, Rational>& terms() const { return terms_; }
  std::map<JetMonomial, Rational>& mutable_terms() { return terms_; }

  Rational coeff(const JetMonomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
  }
  Rational constant_term() const { return coeff(JetMonomial{}); }

  friend DiffPoly operator+(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator-(const DiffPoly& a, const DiffPoly& b);
  friend DiffPoly operator*(const DiffPoly& a, const DiffPoly& b);
  DiffPoly operator-() const;
  DiffPoly& operator+=(const DiffPoly& o) { return *this = *this + o; }
  DiffPoly& operator-=(const DiffPoly& o) { return *this = *this - o; }
  DiffPoly& operator*=(const DiffPoly& o) { return *this = *this * o; }
  DiffPoly scaled(const Rational& c) const;
  friend bool operator==(const DiffPoly& a, const DiffPoly& b) {
    return a.terms_ == b.terms_;
  }
  friend bool operator!=(const DiffPoly& a, const DiffPoly& b) {
    return !(a == b);
  }

  /* Drops monomials whose total degree (sum of |exponents|) exceeds cap. */
  DiffPoly truncated_degree(int cap) const;
  /* Keeps monomials whose symbols are all of jet order 0. */
  DiffPoly jet_order_zero_part() const;
  int max_weight() const;

  std::string str() const;

 private:
  std::map<JetMonomial, Rational> terms_;
};

/* Presentation of a truncated (log) jet algebra on the standard SNC chart:
 * coordinates gamma_1..gamma_d, divisor gamma_1...gamma_r, log symbols
 * ell_1..ell_r, jets up to order K. The derivation follows
 * d(gamma_i) = gamma_i ell_i on divisor coordinates and raises jet order
 * everywhere else; normal forms eliminate jets of divisor coordinates. */
class LogJetAlgebra {
 public:
  LogJetAlgebra(int dimension, int divisor_rank, int truncation);

  int dimension() const { return d_; }
  int divisor_rank() const { return r_; }
  int truncation() const { return k_; }
  const std::set<int>& localized_indices() const { return localized_; }

  JetSymbol gamma_symbol(int i, int jet = 0) const;
  JetSymbol ell_symbol(int i, int jet = 0) const;
  DiffPoly gamma(int i, int jet = 0) const {
    return DiffPoly::symbol(gamma_symbol(i, jet));
  }
  DiffPoly ell(int i, int jet = 0) const {
    return DiffPoly::symbol(ell_symbol(i, jet));
  }
  /* gamma_i^{-1}, only on localized variants. */
  DiffPoly gamma_inverse(int i) const;

  /* The monomial cutting out the divisor in the chart. */
  DiffPoly chart_divisor() const;

  const std::map<JetSymbol, DiffPoly>& derivation_table() const {
    return table_;
  }

  /* The derivation. Throws TruncationExceeded when a jet order would pass
   * the truncation. */
  DiffPoly derive(const DiffPoly& p) const;

  /* Rewrites jets of divisor coordinates into gamma_i and ell-symbols.
   * Idempotent; the image of the defining rewrite system's normal form. */
  DiffPoly normal_form(const DiffPoly& p) const;
  bool is_normal(const DiffPoly& p) const;

  /* Variant with the given gamma coordinates inverted (for open-chart
   * comparisons only). */
  LogJetAlgebra localized(const std::set<int>& indices) const;

  /* Normal monomials of the given contracting weight with total gamma
   * degree bounded by gamma_cap (the weight alone leaves gamma_i^e free). */
  std::vector<JetMonomial> basis_monomials(int weight, int gamma_cap) const;

  std::string presentation_text() const;

 private:
  void validate_poly(const DiffPoly& p) const;

  int d_, r_, k_;
  std::set<int> localized_;
  std::map<JetSymbol, DiffPoly> table_;
  std::map<JetSymbol, DiffPoly> gamma_rewrites_;  // divisor jets, order >= 1
};

LogJetAlgebra jet_algebra(int dimension, int truncation);
LogJetAlgebra log_jet_algebra(int dimension, int divisor_rank, int truncation);

/* True iff the derivation maps each listed monomial ideal generator's ideal
 * into itself; generators must be monomials so membership is exact
 * per-term divisibility. */
bool ideal_stability_check(const LogJetAlgebra& a,
                           const std::vector<DiffPoly>& generators);
/* Divisor-component ideals (gamma_i), i <= divisor_rank. */
bool ideal_stability_check(const LogJetAlgebra& a);

/* Chart of the associated variety: the jet-order-0 subring modulo the
 * jet-order-0 parts of all derivation images. */
struct AssVarPresentation {
  std::vector<std::pair<std::string, int>> generators;  // name, weight
  std::vector<DiffPoly> relations;
  std::string str() const;
};
AssVarPresentation assvar_presentation(const LogJetAlgebra& a);

/* Arc into the chart with the divisor-pairing one-form coefficients. */
struct LogArc {
  std::vector<qseries::TruncatedSeries<Rational>> phi;
  std::vector<qseries::TruncatedSeries<Rational>> psi;
};

struct LiftResult {
  enum class Kind { unique, family, no_lift } kind = Kind::no_lift;
  std::optional<LogArc> arc;  // absent for no_lift
  int free_parameters = 0;    // family only
  int failing_index = 0;      // no_lift only, 1-based
};

/* Lifts a K-truncated arc through the projection from log jets: unique off
 * the divisor, a (K+1)-parameter family per coordinate factoring through
 * it, impossible otherwise. */
LiftResult lift_arc(const std::vector<qseries::TruncatedSeries<Rational>>& phi,
                    const LogJetAlgebra& a);

/* Does d(phi_i) = psi_i phi_i hold on the shared determined range? */
bool log_arc_consistent(const LogArc& arc, int divisor_rank);

/* Affine chart with a monomial divisor and a polynomial vector field:
 * variables u_1..u_n as jet-order-0 gamma symbols, derivation given by its
 * images on the variables. */
struct ChartData {
  int n_vars = 0;
  std::set<int> divisor_vars;            // 1-based indices
  std::vector<DiffPoly> derivation;      // image of each u_v
};

/* Algebra-with-derivation map out of a log jet algebra, exact modulo total
 * degree > degree_cap in the target chart. */
struct AlgebraMap {
  std::map<JetSymbol, DiffPoly> images;
  int degree_cap = 0;
  int verified_degree = 0;  // derivation compatibility certified up to here
  DiffPoly apply(const DiffPoly& p) const;
};

/* The unique derivation-compatible extension of f (given by the images of
 * gamma_1..gamma_d) sending ell_i to the logarithmic derivative of
 * f(gamma_i). Throws NotDivisorial if some f(gamma_i) is not unit times a
 * divisor monomial, NotTangent if the chart derivation is not tangent to
 * its divisor. */
AlgebraMap universal_extension(const ChartData& y,
                               const std::vector<DiffPoly>& f,
                               const LogJetAlgebra& a, int degree_cap);

}  // namespace logcdr::logjets
