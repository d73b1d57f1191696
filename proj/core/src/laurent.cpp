#include "logcdr/laurent.hpp"

#include <sstream>

#include "logcdr/errors.hpp"

namespace logcdr::qseries {

LaurentY::LaurentY(const Rational& constant) {
  if (constant != 0) terms_[0] = constant;
}

LaurentY::LaurentY(long constant) {
  if (constant != 0) terms_[0] = Rational(constant);
}

LaurentY LaurentY::monomial(const Rational& coeff, int exp) {
  LaurentY out;
  if (coeff != 0) out.terms_[exp] = coeff;
  return out;
}

int LaurentY::min_exp() const {
  if (terms_.empty()) throw Error("min_exp of zero Laurent polynomial");
  return terms_.begin()->first;
}

int LaurentY::max_exp() const {
  if (terms_.empty()) throw Error("max_exp of zero Laurent polynomial");
  return terms_.rbegin()->first;
}

Rational LaurentY::coeff(int exp) const {
  auto it = terms_.find(exp);
  return it == terms_.end() ? Rational(0) : it->second;
}

void LaurentY::set(int exp, const Rational& c) {
  if (c == 0)
    terms_.erase(exp);
  else
    terms_[exp] = c;
}

LaurentY& LaurentY::operator+=(const LaurentY& o) {
  for (const auto& [e, c] : o.terms_) set(e, coeff(e) + c);
  return *this;
}

LaurentY& LaurentY::operator-=(const LaurentY& o) {
  for (const auto& [e, c] : o.terms_) set(e, coeff(e) - c);
  return *this;
}

LaurentY LaurentY::operator-() const {
  LaurentY out;
  for (const auto& [e, c] : terms_) out.terms_[e] = -c;
  return out;
}

LaurentY operator*(const LaurentY& a, const LaurentY& b) {
  LaurentY out;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_)
      out.set(ea + eb, out.coeff(ea + eb) + ca * cb);
  return out;
}

LaurentY operator*(const Rational& s, const LaurentY& a) {
  LaurentY out;
  if (s == 0) return out;
  for (const auto& [e, c] : a.terms()) out += LaurentY::monomial(s * c, e);
  return out;
}

LaurentY LaurentY::shifted(int k) const {
  LaurentY out;
  for (const auto& [e, c] : terms_) out.terms_[e + k] = c;
  return out;
}

std::optional<LaurentY> LaurentY::try_invert() const {
  if (terms_.size() != 1) return std::nullopt;
  const auto& [e, c] = *terms_.begin();
  return monomial(Rational(1) / c, -e);
}

Rational LaurentY::evaluate(const Rational& v) const {
  if (v == 0) throw Error("cannot evaluate Laurent polynomial at y = 0");
  Rational out = 0;
  for (const auto& [e, c] : terms_) {
    Rational p = 1;
    Rational base = e >= 0 ? v : Rational(1) / v;
    for (int i = 0; i < std::abs(e); ++i) p *= base;
    out += c * p;
  }
  return out;
}

std::string LaurentY::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) os << ' ';
    first = false;
    if (e == 0)
      os << c.get_str();
    else
      os << c.get_str() << "*y^" << e;
  }
  return os.str();
}

}  // namespace logcdr::qseries
