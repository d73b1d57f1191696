#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logcdr/errors.hpp"
#include "logcdr/laurent.hpp"
#include "logcdr/ratfun.hpp"

namespace logcdr::qseries {

/* Coefficient-ring hooks used by TruncatedSeries. Overloads for RingElt
 * live next to that type. */
inline bool coeff_is_zero(const Rational& c) { return c == 0; }
inline bool coeff_is_zero(const LaurentY& c) { return c.is_zero(); }
inline bool coeff_is_zero(const RationalFunctionY& c) { return c.is_zero(); }

inline std::optional<Rational> coeff_try_invert(const Rational& c) {
  if (c == 0) return std::nullopt;
  return Rational(1) / c;
}
inline std::optional<LaurentY> coeff_try_invert(const LaurentY& c) {
  return c.try_invert();
}
inline std::optional<RationalFunctionY> coeff_try_invert(
    const RationalFunctionY& c) {
  return c.try_invert();
}

/* Unit of the coefficient ring, shaped like the sample value. */
inline Rational coeff_one(const Rational&) { return Rational(1); }
inline LaurentY coeff_one(const LaurentY&) { return LaurentY(1); }
inline RationalFunctionY coeff_one(const RationalFunctionY&) {
  return RationalFunctionY(LaurentY(1));
}

/* Power series in q truncated at order N: coefficients for q^0..q^N, exact. */
template <class C>
class TruncatedSeries {
 public:
  explicit TruncatedSeries(int order, C zero = C{})
      : zero_(std::move(zero)), coeffs_(static_cast<size_t>(order) + 1, zero_) {
    if (order < 0) throw Error("series order must be >= 0");
  }

  static TruncatedSeries constant(int order, const C& c0, C zero = C{}) {
    TruncatedSeries s(order, std::move(zero));
    s.coeffs_[0] = c0;
    return s;
  }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const C& coeff(int m) const { return coeffs_.at(static_cast<size_t>(m)); }
  void set_coeff(int m, C v) { coeffs_.at(static_cast<size_t>(m)) = std::move(v); }
  const C& zero_value() const { return zero_; }

  bool is_zero() const {
    for (const C& c : coeffs_)
      if (!coeff_is_zero(c)) return false;
    return true;
  }

  TruncatedSeries truncated(int new_order) const {
    if (new_order > order()) throw Error("cannot extend a truncated series");
    TruncatedSeries out(new_order, zero_);
    for (int m = 0; m <= new_order; ++m) out.coeffs_[m] = coeffs_[m];
    return out;
  }

  friend TruncatedSeries operator+(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    int n = std::min(a.order(), b.order());
    TruncatedSeries out(n, a.zero_);
    for (int m = 0; m <= n; ++m) out.coeffs_[m] = a.coeffs_[m] + b.coeffs_[m];
    return out;
  }
  friend TruncatedSeries operator-(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    int n = std::min(a.order(), b.order());
    TruncatedSeries out(n, a.zero_);
    for (int m = 0; m <= n; ++m) out.coeffs_[m] = a.coeffs_[m] - b.coeffs_[m];
    return out;
  }
  friend TruncatedSeries operator*(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    int n = std::min(a.order(), b.order());
    TruncatedSeries out(n, a.zero_);
    for (int i = 0; i <= n; ++i) {
      if (coeff_is_zero(a.coeffs_[i])) continue;
      for (int j = 0; i + j <= n; ++j) {
        if (coeff_is_zero(b.coeffs_[j])) continue;
        out.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return out;
  }

  TruncatedSeries scaled(const C& s) const {
    TruncatedSeries out(order(), zero_);
    for (int m = 0; m <= order(); ++m) out.coeffs_[m] = coeffs_[m] * s;
    return out;
  }

  /* Multiplicative inverse; requires the q^0 coefficient to be a unit. */
  TruncatedSeries invert() const {
    auto c0i = coeff_try_invert(coeffs_[0]);
    if (!c0i)
      throw NonUnitConstantTerm("series q^0 coefficient is not a unit");
    TruncatedSeries out(order(), zero_);
    out.coeffs_[0] = *c0i;
    for (int n = 1; n <= order(); ++n) {
      C acc = zero_;
      for (int j = 1; j <= n; ++j) {
        if (coeff_is_zero(coeffs_[j])) continue;
        acc += coeffs_[j] * out.coeffs_[n - j];
      }
      out.coeffs_[n] = -(*c0i * acc);
    }
    return out;
  }

  friend TruncatedSeries operator/(const TruncatedSeries& a,
                                   const TruncatedSeries& b) {
    int n = std::min(a.order(), b.order());
    return a.truncated(n) * b.truncated(n).invert();
  }

  TruncatedSeries pow(int e) const {
    if (e < 0) return invert().pow(-e);
    TruncatedSeries out = constant(order(), coeff_one(coeffs_[0]), zero_);
    TruncatedSeries base = *this;
    for (int k = e; k > 0; k >>= 1) {
      if (k & 1) out = out * base;
      base = base * base;
    }
    return out;
  }

  bool operator==(const TruncatedSeries& o) const {
    return order() == o.order() && coeffs_ == o.coeffs_;
  }

  /* Equality of the first min(orders, M)+1 coefficients. */
  friend bool equal_up_to(const TruncatedSeries& a, const TruncatedSeries& b,
                          int M) {
    int n = std::min({a.order(), b.order(), M});
    for (int m = 0; m <= n; ++m)
      if (!coeff_is_zero(a.coeffs_[m] - b.coeffs_[m])) return false;
    return true;
  }

  template <class F>
  auto map_coeffs(F f) const {
    using D = std::decay_t<decltype(f(std::declval<const C&>()))>;
    TruncatedSeries<D> out(order(), f(zero_));
    for (int m = 0; m <= order(); ++m) out.set_coeff(m, f(coeffs_[m]));
    return out;
  }

 private:
  C zero_;
  std::vector<C> coeffs_;
};

/* Exact per-order y-degree window, absent for zero coefficients. */
std::optional<std::pair<int, int>> ydeg_window(
    const TruncatedSeries<LaurentY>& s, int m);
/* Union of the per-order windows, absent for the zero series. */
std::optional<std::pair<int, int>> ydeg_envelope(
    const TruncatedSeries<LaurentY>& s);

struct ShiftedSeries {
  TruncatedSeries<LaurentY> series;
  /* Largest order of the result fully determined by the input's order and
   * y-degree envelope (negative exponents pull from higher input orders). */
  int verified_order;
};

/* y -> q^k y, k >= 1. Throws NegativeQPower if a nonzero monomial would
 * leave the power-series range, EmptyVerifiableRange if no order of the
 * result is certifiable. */
ShiftedSeries shift_y(const TruncatedSeries<LaurentY>& s, int k);

struct Discrepancy {
  int order;
  int y_exp;
  Rational lhs;
  Rational rhs;
};

struct ShiftCompareReport {
  bool passed = false;
  int factor_exponent = 0;
  int verified_order = -1;
  std::optional<Discrepancy> first_discrepancy;
};

/* Compares s(q, q^k y) with (-y)^{-d} s(q, y) coefficientwise on the zone
 * where the left side is determined by the stored truncation. An order M is
 * fully comparable iff the right side's support at M lies inside that zone;
 * verified_order is the largest M with every order <= M fully comparable.
 * Discrepancies are reported in (order, y-exponent) lexicographic scan
 * order across the whole determined zone. */
ShiftCompareReport compare_shift_with_factor(
    const TruncatedSeries<LaurentY>& s, int d, int k = 1);

/* Specializations. */
LaurentY specialize_q0(const TruncatedSeries<LaurentY>& s);
TruncatedSeries<Rational> specialize_y(const TruncatedSeries<LaurentY>& s,
                                       const Rational& v);
TruncatedSeries<Rational> specialize_y1(const TruncatedSeries<LaurentY>& s);
/* Rational-coefficient series viewed with constant LaurentY coefficients. */
TruncatedSeries<LaurentY> embed_rational_series(
    const TruncatedSeries<Rational>& s);

}  // namespace logcdr::qseries
