#include "logcdr/genus.hpp"

#include <utility>

namespace logcdr::genus {

namespace {

using LElt = RingElement<LaurentY>;
using FElt = RingElement<RationalFunctionY>;

LElt to_laurent_elt(const RElt& e, const RingSpecPtr& ring) {
  LElt out = e.map_scalars([](const Rational& c) { return LaurentY(c); });
  return out.spec() ? out : LElt(ring);
}

FElt to_rf_elt(const LElt& e) {
  return e.map_scalars(
      [](const LaurentY& c) { return RationalFunctionY(c); });
}

FRingSeries to_rf_series(const LRingSeries& s) {
  return s.map_coeffs([](const LElt& c) { return to_rf_elt(c); });
}

/* 1 - q^a u E as a series, u a Laurent monomial in y. */
void mul_factor(LRingSeries& acc, int a, const LaurentY& u, const LElt& E) {
  int N = acc.order();
  if (a > N) return;
  LRingSeries f(N, LElt(E.spec()));
  LElt unit(E.spec(), LaurentY(1));
  f.set_coeff(0, unit);
  LElt term = -E.scaled(u);
  if (a == 0)
    f.set_coeff(0, unit + term);
  else
    f.set_coeff(a, term);
  acc = acc * f;
}

} // namespace

void PairData::validate() const {
  if (dimension < 1) throw Error("pair dimension must be >= 1");
  if (!ring) throw Error("pair has no ring");
  if (static_cast<int>(cotangent_roots.size()) -
          static_cast<int>(cotangent_neg_roots.size()) !=
      dimension)
    throw Error("cotangent root count does not match the dimension");
  auto check = [&](const RElt& e, const char* what) {
    if (e.spec() && e.spec() != ring)
      throw Error(std::string(what) + " belongs to a different ring");
    if (!chow::scalar_is_zero(e.scalar_part()))
      throw NonNilpotentInput(std::string(what) + " has a degree-0 part");
  };
  for (const RElt& e : cotangent_roots) check(e, "cotangent root");
  for (const RElt& e : cotangent_neg_roots) check(e, "cotangent root");
  for (const RElt& e : divisor_classes) check(e, "divisor class");
}

LRingSeries ell_of_bundle(const RingSpecPtr& ring,
                          const std::vector<RElt>& roots, int order) {
  LElt unit(ring, LaurentY(1));
  LRingSeries acc = LRingSeries::constant(order, unit, LElt(ring));
  LaurentY y = LaurentY::monomial(1, 1);
  LaurentY yinv = LaurentY::monomial(1, -1);
  LaurentY one(1);
  for (const RElt& root : roots) {
    if (!chow::scalar_is_zero(root.scalar_part()))
      throw NonNilpotentInput("bundle root has a degree-0 part");
    LElt eps = to_laurent_elt(root, ring);
    LElt E = chow::exp_class(eps);
    LElt Einv = chow::exp_class(-eps);
    for (int j = 1; j <= order + 1; ++j) {
      mul_factor(acc, j - 1, y, E);
      mul_factor(acc, j, yinv, Einv);
    }
    LRingSeries den = LRingSeries::constant(order, unit, LElt(ring));
    for (int j = 1; j <= order; ++j) {
      mul_factor(den, j, one, E);
      mul_factor(den, j, one, Einv);
    }
    acc = acc * den.invert();
  }
  return acc;
}

FRingSeries lambda_ell(const RingSpecPtr& ring, const KClass& k, int order) {
  FRingSeries out = to_rf_series(ell_of_bundle(ring, k.positive_roots, order));
  if (!k.negative_roots.empty())
    out = out *
          to_rf_series(ell_of_bundle(ring, k.negative_roots, order)).invert();
  if (k.trivial_rank_shift != 0) {
    auto g = qseries::g_series(order);
    FRingSeries ge = g.map_coeffs([&](const LaurentY& c) {
      return FElt(ring, RationalFunctionY(c));
    });
    out = out * ge.pow(k.trivial_rank_shift);
  }
  return out;
}

KClass log_cotangent_class(const PairData& p) {
  KClass k;
  k.positive_roots = p.cotangent_roots;
  k.negative_roots = p.cotangent_neg_roots;
  k.negative_roots.insert(k.negative_roots.end(), p.divisor_classes.begin(),
                          p.divisor_classes.end());
  k.trivial_rank_shift = p.divisor_count();
  return k;
}

RElt tangent_todd(const PairData& p) {
  std::vector<RElt> pos, neg;
  for (const RElt& a : p.cotangent_roots) pos.push_back(-a);
  for (const RElt& a : p.cotangent_neg_roots) neg.push_back(-a);
  RElt td = chow::todd_from_roots(pos);
  if (!neg.empty()) td = td * *chow::todd_from_roots(neg).try_invert();
  return td.spec() ? td : RElt(p.ring, 1);
}

TruncatedSeries<LaurentY> elliptic_genus(const PairData& p, int order) {
  p.validate();
  FRingSeries cls = lambda_ell(p.ring, log_cotangent_class(p), order);
  FElt td = to_rf_elt(to_laurent_elt(tangent_todd(p), p.ring));
  TruncatedSeries<LaurentY> out(order);
  for (int m = 0; m <= order; ++m) {
    RationalFunctionY v = chow::integrate(cls.coeff(m) * td, *p.ring);
    auto cleared = v.as_laurent();
    if (!cleared)
      throw DenominatorNotClearing("genus coefficient at q^" +
                                   std::to_string(m) +
                                   " is not a Laurent polynomial: " + v.str());
    out.set_coeff(m, *cleared);
  }
  return out;
}

LaurentY chi_y(const PairData& p) {
  LaurentY primary = qseries::specialize_q0(elliptic_genus(p, 0));

  /* Independent route: chi_y = integral of ch(wedge_{-y} Omega(log D)) Td,
   * with the wedge of the K-class taken factorwise. */
  p.validate();
  RationalFunctionY y(LaurentY::monomial(1, 1));
  RationalFunctionY one(LaurentY(1));
  FElt unit(p.ring, one);
  auto wedge_line = [&](const RElt& root) {
    LElt E = chow::exp_class(to_laurent_elt(root, p.ring));
    return unit - to_rf_elt(E).scaled(y);
  };
  KClass k = log_cotangent_class(p);
  FElt w = unit;
  for (const RElt& a : k.positive_roots) w = w * wedge_line(a);
  for (const RElt& a : k.negative_roots)
    w = w * *wedge_line(a).try_invert();
  for (int j = 0; j < k.trivial_rank_shift; ++j)
    w = w.scaled(one - y);
  FElt td = to_rf_elt(to_laurent_elt(tangent_todd(p), p.ring));
  auto cross = chow::integrate(w * td, *p.ring).as_laurent();
  if (!cross || *cross != primary)
    throw Error("chi_y cross-check failed for pair " + p.name);
  return primary;
}

TruncatedSeries<Rational> euler_spec(const PairData& p, int order) {
  auto g = elliptic_genus(p, order);
  auto out = qseries::specialize_y1(g);
  Rational euler = chi_y(p).evaluate(1);
  if (out.coeff(0) != euler)
    throw Error("q^0 of the y=1 specialization disagrees with the Euler "
                "number for pair " +
                p.name);
  return out;
}

EllipticityReport check_ellipticity(const TruncatedSeries<LaurentY>& s,
                                    int d) {
  return qseries::compare_shift_with_factor(s, d, 1);
}

bool anticanonical_check(const PairData& p) {
  RElt lhs(p.ring);
  for (const RElt& a : p.cotangent_roots) lhs += a;
  for (const RElt& a : p.cotangent_neg_roots) lhs -= a;
  RElt rhs(p.ring);
  for (const RElt& d : p.divisor_classes) rhs += d;
  return lhs == rhs;
}

}  // namespace logcdr::genus
