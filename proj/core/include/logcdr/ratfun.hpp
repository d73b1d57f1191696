#pragma once

#include <optional>
#include <string>

#include "logcdr/laurent.hpp"

namespace logcdr::qseries {

/* Rational function in y: num/den with den != 0, the pair reduced, and the
 * denominator normalized so its lowest-degree coefficient is 1 (sign and
 * scale carried by the numerator). Equality is then structural. */
class RationalFunctionY {
 public:
  RationalFunctionY();  // zero
  RationalFunctionY(const LaurentY& num);
  RationalFunctionY(const Rational& c);
  RationalFunctionY(long c);
  RationalFunctionY(const LaurentY& num, const LaurentY& den);

  const LaurentY& num() const { return num_; }
  const LaurentY& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  RationalFunctionY operator-() const;
  friend RationalFunctionY operator+(const RationalFunctionY& a,
                                     const RationalFunctionY& b);
  friend RationalFunctionY operator-(const RationalFunctionY& a,
                                     const RationalFunctionY& b);
  friend RationalFunctionY operator*(const RationalFunctionY& a,
                                     const RationalFunctionY& b);
  friend RationalFunctionY operator/(const RationalFunctionY& a,
                                     const RationalFunctionY& b);
  RationalFunctionY& operator+=(const RationalFunctionY& o) { return *this = *this + o; }
  RationalFunctionY& operator-=(const RationalFunctionY& o) { return *this = *this - o; }
  RationalFunctionY& operator*=(const RationalFunctionY& o) { return *this = *this * o; }
  bool operator==(const RationalFunctionY& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }

  std::optional<RationalFunctionY> try_invert() const;
  /* Exact Laurent value if the denominator divides the numerator. */
  std::optional<LaurentY> as_laurent() const;
  bool is_laurent() const { return as_laurent().has_value(); }

  std::string str() const;

 private:
  LaurentY num_, den_;
  void reduce();
};

}  // namespace logcdr::qseries
