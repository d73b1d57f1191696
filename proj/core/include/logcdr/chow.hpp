#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "logcdr/errors.hpp"
#include "logcdr/laurent.hpp"
#include "logcdr/ratfun.hpp"
#include "logcdr/series.hpp"

namespace logcdr::chow {

using qseries::LaurentY;
using qseries::RationalFunctionY;

/* Exponent vector over a RingSpec's generators, with the weighted total
 * degree cached so the degree-lex order is a plain lexicographic compare on
 * (deg, exps). An empty exponent vector is the unit monomial of a pure
 * scalar that has not been attached to a ring yet. */
struct Monomial {
  int deg = 0;
  std::vector<int> exps;

  bool is_unit() const {
    for (int e : exps)
      if (e != 0) return false;
    return true;
  }
  bool divides(const Monomial& m) const {
    if (exps.size() != m.exps.size()) return false;
    for (size_t i = 0; i < exps.size(); ++i)
      if (exps[i] > m.exps[i]) return false;
    return true;
  }
  friend bool operator==(const Monomial& a, const Monomial& b) {
    return a.deg == b.deg && a.exps == b.exps;
  }
  friend bool operator<(const Monomial& a, const Monomial& b) {
    if (a.deg != b.deg) return a.deg < b.deg;
    return a.exps < b.exps;
  }
};

struct Generator {
  std::string name;
  int degree;  // half cohomological degree; top degree equals the dimension
};

struct RewriteRule {
  Monomial lhs;
  std::map<Monomial, Rational> rhs;
};

/* Truncated graded-commutative ring presented by generators, rewrite rules,
 * and an integration functional on the top-degree normal monomials.
 * Monomials of degree above the dimension rewrite to zero implicitly. */
class RingSpec {
 public:
  RingSpec(int dimension, std::vector<Generator> generators,
           std::vector<RewriteRule> rules,
           std::map<Monomial, Rational> integration);

  int dimension() const { return dimension_; }
  const std::vector<Generator>& generators() const { return generators_; }
  int generator_index(std::string_view name) const;  // -1 when absent

  int degree_of(const std::vector<int>& exps) const;
  Monomial make_monomial(std::vector<int> exps) const;
  Monomial unit_monomial() const;

  bool is_normal(const Monomial& m) const;
  /* Normal form of a single monomial as a linear combination. */
  std::map<Monomial, Rational> rewrite(const Monomial& m) const;

  /* All normal-form monomials of the given weighted degree. */
  std::vector<Monomial> normal_basis(int degree) const;

  const std::map<Monomial, Rational>& integration() const {
    return integration_;
  }
  Rational integral_of(const Monomial& m) const;

 private:
  const RewriteRule* applicable_rule(const Monomial& m) const;
  void rewrite_into(const Monomial& m, const Rational& c,
                    std::map<Monomial, Rational>& acc) const;

  int dimension_;
  std::vector<Generator> generators_;
  std::vector<RewriteRule> rules_;
  std::map<Monomial, Rational> integration_;
};

using RingSpecPtr = std::shared_ptr<const RingSpec>;

template <class S>
S scalar_from_rational(const Rational& r) {
  return S(r);
}
template <>
inline RationalFunctionY scalar_from_rational<RationalFunctionY>(
    const Rational& r) {
  return RationalFunctionY(LaurentY(r));
}

inline bool scalar_is_zero(const Rational& s) { return s == 0; }
inline bool scalar_is_zero(const LaurentY& s) { return s.is_zero(); }
inline bool scalar_is_zero(const RationalFunctionY& s) { return s.is_zero(); }

inline std::optional<Rational> scalar_try_invert(const Rational& s) {
  if (s == 0) return std::nullopt;
  return Rational(1) / s;
}
inline std::optional<LaurentY> scalar_try_invert(const LaurentY& s) {
  return s.try_invert();
}
inline std::optional<RationalFunctionY> scalar_try_invert(
    const RationalFunctionY& s) {
  return s.try_invert();
}

inline std::string scalar_str(const Rational& s) { return to_string(s); }
inline std::string scalar_str(const LaurentY& s) { return s.str(); }
inline std::string scalar_str(const RationalFunctionY& s) { return s.str(); }

/* Ring value in normal form. A default-constructed element is the zero of a
 * not-yet-attached ring; it absorbs in multiplication and disappears in
 * addition, so series code can use it as a coefficient prototype. */
template <class S>
class RingElement {
 public:
  RingElement() = default;
  explicit RingElement(RingSpecPtr spec) : spec_(std::move(spec)) {}
  RingElement(RingSpecPtr spec, const S& scalar) : spec_(std::move(spec)) {
    if (!scalar_is_zero(scalar)) terms_[unit_key()] = scalar;
  }

  static RingElement from_monomial(RingSpecPtr spec, const Monomial& m,
                                   const S& coeff) {
    RingElement out(std::move(spec));
    if (scalar_is_zero(coeff)) return out;
    for (auto& [mono, c] : out.spec_->rewrite(m)) {
      S v = coeff * scalar_from_rational<S>(c);
      if (!scalar_is_zero(v)) out.terms_[mono] = std::move(v);
    }
    return out;
  }
  static RingElement generator(RingSpecPtr spec, std::string_view name) {
    int i = spec->generator_index(name);
    if (i < 0) throw Error("unknown generator: " + std::string(name));
    std::vector<int> exps(spec->generators().size(), 0);
    exps[static_cast<size_t>(i)] = 1;
    Monomial m = spec->make_monomial(std::move(exps));
    return from_monomial(std::move(spec), m, scalar_from_rational<S>(1));
  }

  const RingSpecPtr& spec() const { return spec_; }
  bool is_zero() const { return terms_.empty(); }
  const std::map<Monomial, S>& terms() const { return terms_; }

  S coeff(const Monomial& m) const {
    auto it = terms_.find(m);
    if (it != terms_.end()) return it->second;
    if (m.is_unit()) {  // unit key shape differs between attached/detached
      auto ut = terms_.find(unit_key());
      if (ut != terms_.end() && m.exps.size() != ut->first.exps.size())
        return ut->second;
    }
    return scalar_from_rational<S>(0);
  }
  S scalar_part() const {
    for (auto& [m, c] : terms_)
      if (m.deg == 0) return c;
    return scalar_from_rational<S>(0);
  }

  /* Part of the given weighted degree. */
  RingElement component(int degree) const {
    RingElement out(spec_);
    for (auto& [m, c] : terms_)
      if (m.deg == degree) out.terms_[m] = c;
    return out;
  }
  int top_degree_present() const {
    int top = -1;
    for (auto& [m, c] : terms_) top = std::max(top, m.deg);
    return top;
  }

  friend RingElement operator+(const RingElement& a, const RingElement& b) {
    RingElement out(merge_specs(a, b));
    out.terms_ = a.aligned_terms(out.spec_);
    for (auto& [m, c] : b.aligned_terms(out.spec_)) {
      auto [it, fresh] = out.terms_.try_emplace(m, c);
      if (!fresh) {
        it->second += c;
        if (scalar_is_zero(it->second)) out.terms_.erase(it);
      }
    }
    return out;
  }
  friend RingElement operator-(const RingElement& a, const RingElement& b) {
    return a + (-b);
  }
  RingElement operator-() const {
    RingElement out(spec_);
    for (auto& [m, c] : terms_) out.terms_[m] = -c;
    return out;
  }
  friend RingElement operator*(const RingElement& a, const RingElement& b) {
    RingElement out(merge_specs(a, b));
    if (!out.spec_) {  // product of detached scalars
      if (!a.terms_.empty() && !b.terms_.empty()) {
        S v = a.terms_.begin()->second * b.terms_.begin()->second;
        if (!scalar_is_zero(v)) out.terms_[Monomial{}] = std::move(v);
      }
      return out;
    }
    for (auto& [ma, ca] : a.aligned_terms(out.spec_))
      for (auto& [mb, cb] : b.aligned_terms(out.spec_)) {
        S v = ca * cb;
        if (scalar_is_zero(v)) continue;
        std::vector<int> exps(ma.exps);
        for (size_t i = 0; i < exps.size(); ++i) exps[i] += mb.exps[i];
        for (auto& [mono, r] : out.spec_->rewrite(
                 out.spec_->make_monomial(std::move(exps)))) {
          S w = v * scalar_from_rational<S>(r);
          if (scalar_is_zero(w)) continue;
          auto [it, fresh] = out.terms_.try_emplace(mono, w);
          if (!fresh) {
            it->second += w;
            if (scalar_is_zero(it->second)) out.terms_.erase(it);
          }
        }
      }
    return out;
  }
  RingElement& operator+=(const RingElement& o) { return *this = *this + o; }
  RingElement& operator-=(const RingElement& o) { return *this = *this - o; }
  RingElement& operator*=(const RingElement& o) { return *this = *this * o; }

  RingElement scaled(const S& s) const {
    RingElement out(spec_);
    if (scalar_is_zero(s)) return out;
    for (auto& [m, c] : terms_) {
      S v = c * s;
      if (!scalar_is_zero(v)) out.terms_[m] = std::move(v);
    }
    return out;
  }
  RingElement scaled_rational(const Rational& r) const {
    return scaled(scalar_from_rational<S>(r));
  }

  /* Inverse of unit-scalar + nilpotent, via the finite geometric series. */
  std::optional<RingElement> try_invert() const {
    if (!spec_) {
      if (terms_.empty()) return std::nullopt;
      auto ci = scalar_try_invert(terms_.begin()->second);
      if (!ci) return std::nullopt;
      return RingElement(nullptr, *ci);
    }
    auto ci = scalar_try_invert(scalar_part());
    if (!ci) return std::nullopt;
    RingElement cinv(spec_, *ci);
    RingElement n = *this - RingElement(spec_, scalar_part());
    RingElement step = -(cinv * n);
    RingElement acc(spec_, scalar_from_rational<S>(1));
    RingElement pw = acc;
    for (int k = 1; k <= spec_->dimension(); ++k) {
      pw = pw * step;
      if (pw.is_zero()) break;
      acc += pw;
    }
    return cinv * acc;
  }

  friend bool operator==(const RingElement& a, const RingElement& b) {
    return (a - b).is_zero();
  }
  friend bool operator!=(const RingElement& a, const RingElement& b) {
    return !(a == b);
  }

  template <class F>
  auto map_scalars(F f) const {
    using D = std::decay_t<decltype(f(std::declval<const S&>()))>;
    RingElement<D> out(spec_);
    for (auto& [m, c] : terms_) {
      D v = f(c);
      if (!scalar_is_zero(v)) out.mutable_terms()[m] = std::move(v);
    }
    return out;
  }
  std::map<Monomial, S>& mutable_terms() { return terms_; }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += "(" + scalar_str(c) + ")";
      if (!m.is_unit()) out += "*" + monomial_str(m);
    }
    return out;
  }
  std::string monomial_str(const Monomial& m) const {
    if (!spec_ || m.is_unit()) return "1";
    std::string out;
    for (size_t i = 0; i < m.exps.size(); ++i) {
      if (m.exps[i] == 0) continue;
      if (!out.empty()) out += "*";
      out += spec_->generators()[i].name;
      if (m.exps[i] != 1) out += "^" + std::to_string(m.exps[i]);
    }
    return out;
  }

 private:
  Monomial unit_key() const {
    return spec_ ? spec_->unit_monomial() : Monomial{};
  }
  static RingSpecPtr merge_specs(const RingElement& a, const RingElement& b) {
    if (a.spec_ && b.spec_ && a.spec_ != b.spec_)
      throw Error("ring elements belong to different rings");
    return a.spec_ ? a.spec_ : b.spec_;
  }
  /* Terms with the unit key reshaped for the given spec. */
  std::map<Monomial, S> aligned_terms(const RingSpecPtr& spec) const {
    if (spec_ == spec || !spec) return terms_;
    std::map<Monomial, S> out;
    for (auto& [m, c] : terms_)
      out[m.exps.empty() ? spec->unit_monomial() : m] = c;
    return out;
  }

  RingSpecPtr spec_;
  std::map<Monomial, S> terms_;  // normal form, no zero coefficients
};

/* Coefficient hooks so q-series can carry ring values. */
template <class S>
bool coeff_is_zero(const RingElement<S>& e) {
  return e.is_zero();
}
template <class S>
std::optional<RingElement<S>> coeff_try_invert(const RingElement<S>& e) {
  return e.try_invert();
}
template <class S>
RingElement<S> coeff_one(const RingElement<S>& e) {
  return RingElement<S>(e.spec(), scalar_from_rational<S>(1));
}

/* Normal form of a free polynomial given as (coefficient, exponents) terms. */
template <class S>
RingElement<S> normal_form(
    RingSpecPtr spec,
    const std::vector<std::pair<S, std::vector<int>>>& raw) {
  RingElement<S> out(spec);
  for (auto& [c, exps] : raw)
    out += RingElement<S>::from_monomial(spec, spec->make_monomial(exps), c);
  return out;
}

/* Finite exponential sum of a nilpotent class. */
template <class S>
RingElement<S> exp_class(const RingElement<S>& e) {
  if (!scalar_is_zero(e.scalar_part()))
    throw NonNilpotentInput("exp_class needs a zero degree-0 part");
  if (!e.spec()) return RingElement<S>(nullptr, scalar_from_rational<S>(1));
  RingElement<S> acc(e.spec(), scalar_from_rational<S>(1));
  RingElement<S> term = acc;
  for (int k = 1; k <= e.spec()->dimension(); ++k) {
    term = (term * e).scaled_rational(Rational(1) / k);
    if (term.is_zero()) break;
    acc += term;
  }
  return acc;
}

/* Todd class from tangent Chern roots: product over roots of the truncated
 * expansion of x / (1 - e^{-x}), computed as the inverse of
 * sum_k (-x)^k / (k+1)!. */
template <class S>
RingElement<S> todd_from_roots(const std::vector<RingElement<S>>& roots) {
  RingElement<S> out(nullptr, scalar_from_rational<S>(1));
  for (const RingElement<S>& x : roots) {
    if (!scalar_is_zero(x.scalar_part()))
      throw NonNilpotentInput("todd_from_roots needs nilpotent roots");
    if (!x.spec()) continue;  // zero root of a detached scalar
    RingElement<S> den(x.spec(), scalar_from_rational<S>(1));
    RingElement<S> pw(x.spec(), scalar_from_rational<S>(1));
    for (int k = 1; k <= x.spec()->dimension(); ++k) {
      pw = pw * (-x);
      if (pw.is_zero()) break;
      den += pw.scaled_rational(
          Rational(1) / factorial(static_cast<unsigned long>(k) + 1));
    }
    out = out * *den.try_invert();
  }
  return out;
}

/* Integration functional: pairs the top-degree component against the table;
 * lower degrees contribute nothing. */
template <class S>
S integrate(const RingElement<S>& e, const RingSpec& spec) {
  if (e.spec() && e.spec().get() != &spec)
    throw Error("integrate: element belongs to a different ring");
  S out = scalar_from_rational<S>(0);
  for (auto& [m, c] : e.terms())
    if (m.deg == spec.dimension())
      out += c * scalar_from_rational<S>(spec.integral_of(m));
  return out;
}

}  // namespace logcdr::chow
