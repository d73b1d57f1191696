#include "logcdr/ratfun.hpp"

#include <vector>

#include "logcdr/errors.hpp"

namespace logcdr::qseries {
namespace {

/* Dense polynomial helpers for the gcd reduction; index = degree. */
using Poly = std::vector<Rational>;

Poly to_poly(const LaurentY& v, int shift) {
  Poly p(static_cast<size_t>(v.max_exp() - shift) + 1, Rational(0));
  for (const auto& [e, c] : v.terms()) p[static_cast<size_t>(e - shift)] = c;
  return p;
}

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly rem(Poly a, const Poly& b) {
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    size_t off = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    trim(a);
  }
  return a;
}

Poly divide_exact(Poly a, const Poly& b) {
  Poly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, Rational(0));
  while (a.size() >= b.size() && !a.empty()) {
    Rational f = a.back() / b.back();
    size_t off = a.size() - b.size();
    q[off] = f;
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= f * b[i];
    trim(a);
  }
  if (!a.empty()) throw Error("internal: inexact polynomial division");
  return q;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (a.empty()) return a;
  Rational lead = a.back();
  for (auto& c : a) c /= lead;
  return a;
}

LaurentY from_poly(const Poly& p, int shift) {
  LaurentY out;
  for (size_t i = 0; i < p.size(); ++i)
    out += LaurentY::monomial(p[i], static_cast<int>(i) + shift);
  return out;
}

}  // namespace

RationalFunctionY::RationalFunctionY() : num_(), den_(1) {}
RationalFunctionY::RationalFunctionY(const LaurentY& num)
    : num_(num), den_(1) {}
RationalFunctionY::RationalFunctionY(const Rational& c)
    : num_(LaurentY(c)), den_(1) {}
RationalFunctionY::RationalFunctionY(long c) : num_(LaurentY(c)), den_(1) {}

RationalFunctionY::RationalFunctionY(const LaurentY& num, const LaurentY& den)
    : num_(num), den_(den) {
  if (den_.is_zero()) throw Error("rational function with zero denominator");
  reduce();
}

void RationalFunctionY::reduce() {
  if (num_.is_zero()) {
    den_ = LaurentY(1);
    return;
  }
  int a = num_.min_exp();
  int b = den_.min_exp();
  Poly p = to_poly(num_, a);
  Poly q = to_poly(den_, b);
  Poly g = gcd(p, q);
  if (g.size() > 1) {
    p = divide_exact(std::move(p), g);
    q = divide_exact(std::move(q), g);
  }
  /* Fold the y-power gap into the numerator; normalize the denominator's
   * constant term (nonzero by construction) to 1. */
  Rational c0 = q.front();
  for (auto& c : p) c /= c0;
  for (auto& c : q) c /= c0;
  num_ = from_poly(p, a - b);
  den_ = from_poly(q, 0);
}

RationalFunctionY RationalFunctionY::operator-() const {
  RationalFunctionY out;
  out.num_ = -num_;
  out.den_ = den_;
  return out;
}

RationalFunctionY operator+(const RationalFunctionY& a,
                            const RationalFunctionY& b) {
  return RationalFunctionY(a.num_ * b.den_ + b.num_ * a.den_,
                           a.den_ * b.den_);
}

RationalFunctionY operator-(const RationalFunctionY& a,
                            const RationalFunctionY& b) {
  return RationalFunctionY(a.num_ * b.den_ - b.num_ * a.den_,
                           a.den_ * b.den_);
}

RationalFunctionY operator*(const RationalFunctionY& a,
                            const RationalFunctionY& b) {
  return RationalFunctionY(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunctionY operator/(const RationalFunctionY& a,
                            const RationalFunctionY& b) {
  if (b.is_zero()) throw Error("division by zero rational function");
  return RationalFunctionY(a.num_ * b.den_, a.den_ * b.num_);
}

std::optional<RationalFunctionY> RationalFunctionY::try_invert() const {
  if (is_zero()) return std::nullopt;
  return RationalFunctionY(den_, num_);
}

std::optional<LaurentY> RationalFunctionY::as_laurent() const {
  /* After reduction the denominator divides the numerator iff it is 1. */
  if (den_ == LaurentY(1)) return num_;
  return std::nullopt;
}

std::string RationalFunctionY::str() const {
  if (den_ == LaurentY(1)) return num_.str();
  return "(" + num_.str() + ") / (" + den_.str() + ")";
}

}  // namespace logcdr::qseries
