#pragma once

#include <map>
#include <optional>
#include <string>

#include "logcdr/rational.hpp"

namespace logcdr::qseries {

/* Laurent polynomial in y over Rational. Invariant: no stored zero
 * coefficients; the zero polynomial has an empty term map. */
class LaurentY {
 public:
  LaurentY() = default;
  LaurentY(const Rational& constant);
  LaurentY(long constant);
  static LaurentY monomial(const Rational& coeff, int exp);

  bool is_zero() const { return terms_.empty(); }
  /* min_exp/max_exp require a nonzero value. */
  int min_exp() const;
  int max_exp() const;
  Rational coeff(int exp) const;
  const std::map<int, Rational>& terms() const { return terms_; }

  LaurentY& operator+=(const LaurentY& o);
  LaurentY& operator-=(const LaurentY& o);
  LaurentY operator-() const;
  friend LaurentY operator+(LaurentY a, const LaurentY& b) { return a += b; }
  friend LaurentY operator-(LaurentY a, const LaurentY& b) { return a -= b; }
  friend LaurentY operator*(const LaurentY& a, const LaurentY& b);
  LaurentY& operator*=(const LaurentY& o) { return *this = *this * o; }
  bool operator==(const LaurentY& o) const { return terms_ == o.terms_; }

  /* Multiplication by y^k. */
  LaurentY shifted(int k) const;
  bool is_monomial() const { return terms_.size() == 1; }
  /* Inverse exists in the Laurent ring iff the value is a single monomial. */
  std::optional<LaurentY> try_invert() const;
  /* y := v, v nonzero. */
  Rational evaluate(const Rational& v) const;

  /* Canonical fragment: ascending exponents, "p/q*y^e", bare scalar at
   * y^0, single spaces, "0" for zero. */
  std::string str() const;

 private:
  std::map<int, Rational> terms_;
  void set(int exp, const Rational& c);
  friend class RationalFunctionY;
};

LaurentY operator*(const Rational& s, const LaurentY& a);

}  // namespace logcdr::qseries
