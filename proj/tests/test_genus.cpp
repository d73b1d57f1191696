#include <doctest.h>

#include <random>

#include "logcdr/genus.hpp"

using namespace logcdr;
using namespace logcdr::genus;

namespace {

using qseries::LaurentY;
using qseries::RationalFunctionY;

RingSpecPtr projective(int d) {
  std::map<chow::Monomial, Rational> integ;
  integ[chow::Monomial{d, {d}}] = 1;
  return std::make_shared<const RingSpec>(
      d, std::vector<chow::Generator>{{"h", 1}}, std::vector<chow::RewriteRule>{},
      integ);
}

RingSpecPtr p1xp1() {
  std::vector<chow::RewriteRule> rules;
  rules.push_back({chow::Monomial{2, {2, 0}}, {}});
  rules.push_back({chow::Monomial{2, {0, 2}}, {}});
  std::map<chow::Monomial, Rational> integ;
  integ[chow::Monomial{2, {1, 1}}] = 1;
  return std::make_shared<const RingSpec>(
      2, std::vector<chow::Generator>{{"a", 1}, {"b", 1}}, std::move(rules),
      integ);
}

/* The line with its two torus-fixed points. */
PairData line_toric() {
  PairData p;
  p.dimension = 1;
  p.ring = projective(1);
  RElt h = RElt::generator(p.ring, "h");
  p.cotangent_roots = {-(h + h)};
  p.divisor_classes = {-h, -h};
  p.name = "p1_toric";
  return p;
}

/* The plane with the triangle of coordinate lines; the cotangent bundle is
 * presented virtually through the Euler sequence O(-1)^3 - O. */
PairData plane_toric() {
  PairData p;
  p.dimension = 2;
  p.ring = projective(2);
  RElt h = RElt::generator(p.ring, "h");
  p.cotangent_roots = {-h, -h, -h};
  p.cotangent_neg_roots = {RElt(p.ring)};
  p.divisor_classes = {-h, -h, -h};
  p.name = "p2_toric";
  return p;
}

PairData line_bare() {
  PairData p = line_toric();
  p.divisor_classes.clear();
  p.name = "p1_empty";
  return p;
}

PairData quadric_toric() {
  PairData p;
  p.dimension = 2;
  p.ring = p1xp1();
  RElt a = RElt::generator(p.ring, "a");
  RElt b = RElt::generator(p.ring, "b");
  p.cotangent_roots = {-(a + a), -(b + b)};
  p.divisor_classes = {-a, -a, -b, -b};
  p.name = "p1xp1_toric";
  return p;
}

LaurentY L(std::initializer_list<std::pair<long, int>> terms) {
  LaurentY out;
  for (auto& [c, e] : terms) out += LaurentY::monomial(c, e);
  return out;
}

}  // namespace

TEST_CASE("ell_of_bundle of the trivial line bundle is G") {
  auto ring = projective(1);
  auto s = ell_of_bundle(ring, {RElt(ring)}, 6);
  auto g = qseries::g_series(6);
  for (int m = 0; m <= 6; ++m)
    CHECK(s.coeff(m) == RingElement<LaurentY>(ring, g.coeff(m)));
}

TEST_CASE("ell_of_bundle of the empty sum is 1") {
  auto ring = projective(1);
  auto s = ell_of_bundle(ring, {}, 4);
  CHECK(s.coeff(0) == RingElement<LaurentY>(ring, LaurentY(1)));
  for (int m = 1; m <= 4; ++m) CHECK(s.coeff(m).is_zero());
}

TEST_CASE("ell_of_bundle at q^0 is the (-y)-wedge factor") {
  auto ring = projective(2);
  RElt h = RElt::generator(ring, "h");
  auto s = ell_of_bundle(ring, {-h}, 3);
  using LElt = RingElement<LaurentY>;
  LElt E = chow::exp_class(
      (-h).map_scalars([](const Rational& c) { return LaurentY(c); }));
  LElt expected = LElt(ring, LaurentY(1)) - E.scaled(LaurentY::monomial(1, 1));
  CHECK(s.coeff(0) == expected);
  CHECK_THROWS_AS(ell_of_bundle(ring, {RElt(ring, 1)}, 2), NonNilpotentInput);
}

TEST_CASE("lambda_ell of a pure rank shift is a power of G") {
  auto ring = projective(1);
  KClass k;
  k.trivial_rank_shift = 2;
  auto s = lambda_ell(ring, k, 5);
  auto g = qseries::g_series(5);
  auto g2 = g * g;
  for (int m = 0; m <= 5; ++m)
    CHECK(s.coeff(m) ==
          RingElement<RationalFunctionY>(ring, RationalFunctionY(g2.coeff(m))));
}

TEST_CASE("lambda_ell cancels a repeated root") {
  auto ring = projective(2);
  RElt h = RElt::generator(ring, "h");
  KClass k;
  k.positive_roots = {-h};
  k.negative_roots = {-h};
  auto s = lambda_ell(ring, k, 4);
  CHECK(s.coeff(0) == RingElement<RationalFunctionY>(ring, RationalFunctionY(LaurentY(1))));
  for (int m = 1; m <= 4; ++m) CHECK(s.coeff(m).is_zero());
}

TEST_CASE("lambda_ell of a divisor structure sheaf at q^0") {
  auto ring = projective(1);
  RElt h = RElt::generator(ring, "h");
  KClass k;  // [O_D] = [O] - [O(-D)]
  k.trivial_rank_shift = 1;
  k.negative_roots = {-h};
  auto s = lambda_ell(ring, k, 3);
  using FElt = RingElement<RationalFunctionY>;
  RationalFunctionY y(LaurentY::monomial(1, 1));
  FElt unit(ring, RationalFunctionY(LaurentY(1)));
  FElt E = chow::exp_class((-h).map_scalars([](const Rational& c) {
                             return RationalFunctionY(LaurentY(c));
                           }));
  FElt expected = unit.scaled(RationalFunctionY(L({{1, 0}, {-1, 1}}))) *
                  *(unit - E.scaled(y)).try_invert();
  CHECK(s.coeff(0) == expected);
}

TEST_CASE("lambda_ell is multiplicative on randomized classes") {
  auto ring = p1xp1();
  RElt a = RElt::generator(ring, "a");
  RElt b = RElt::generator(ring, "b");
  std::vector<RElt> pool = {-a, -b, a, b, -(a + b), a + b - a - b + a};
  std::mt19937 rng(23);
  std::uniform_int_distribution<int> pick(0, 5), count(0, 2), shift(-1, 2);
  auto rand_k = [&]() {
    KClass k;
    for (int i = count(rng); i > 0; --i) k.positive_roots.push_back(pool[pick(rng)]);
    for (int i = count(rng); i > 0; --i) k.negative_roots.push_back(pool[pick(rng)]);
    k.trivial_rank_shift = shift(rng);
    return k;
  };
  for (int it = 0; it < 20; ++it) {
    KClass k1 = rand_k(), k2 = rand_k();
    KClass sum;
    sum.positive_roots = k1.positive_roots;
    sum.positive_roots.insert(sum.positive_roots.end(),
                              k2.positive_roots.begin(),
                              k2.positive_roots.end());
    sum.negative_roots = k1.negative_roots;
    sum.negative_roots.insert(sum.negative_roots.end(),
                              k2.negative_roots.begin(),
                              k2.negative_roots.end());
    sum.trivial_rank_shift = k1.trivial_rank_shift + k2.trivial_rank_shift;
    CHECK(lambda_ell(ring, sum, 3) ==
          lambda_ell(ring, k1, 3) * lambda_ell(ring, k2, 3));
  }
}

TEST_CASE("log cotangent class shape") {
  PairData p = line_toric();
  KClass k = log_cotangent_class(p);
  CHECK(k.positive_roots.size() == 1);
  CHECK(k.negative_roots.size() == 2);
  CHECK(k.trivial_rank_shift == 2);
  PairData bare = line_bare();
  KClass kb = log_cotangent_class(bare);
  CHECK(kb.negative_roots.empty());
  CHECK(kb.trivial_rank_shift == 0);
}

TEST_CASE("elliptic genus of the toric line is G") {
  auto g = elliptic_genus(line_toric(), 6);
  CHECK(g == qseries::g_series(6));
}

TEST_CASE("elliptic genus of the toric plane is G^2") {
  auto g = elliptic_genus(plane_toric(), 3);
  auto gg = qseries::g_series(3);
  CHECK(g == gg * gg);
}

TEST_CASE("elliptic genus of the toric quadric surface is G^2") {
  /* Independent geometry with the same log-CY structure: the class of the
   * log cotangent bundle is K-equivalent to 2[O], so the genus must agree
   * with the plane's. */
  auto g = elliptic_genus(quadric_toric(), 3);
  auto gg = qseries::g_series(3);
  CHECK(g == gg * gg);
}

TEST_CASE("elliptic genus of the bare line, frozen coefficients") {
  auto g = elliptic_genus(line_bare(), 4);
  CHECK(g.coeff(0) == L({{1, 0}, {1, 1}}));
  CHECK(g.coeff(1) == L({{-3, 2}, {3, 1}, {3, 0}, {-3, -1}}));
  CHECK(g.coeff(2) == L({{-9, 2}, {9, 1}, {9, 0}, {-9, -1}}));
  CHECK(g.coeff(3) ==
        L({{5, 3}, {-27, 2}, {22, 1}, {22, 0}, {-27, -1}, {5, -2}}));
  CHECK(g.coeff(4) ==
        L({{15, 3}, {-66, 2}, {51, 1}, {51, 0}, {-66, -1}, {15, -2}}));
}

TEST_CASE("chi_y of the shipped pairs") {
  CHECK(chi_y(line_toric()) == L({{1, 0}, {-1, 1}}));
  CHECK(chi_y(plane_toric()) == L({{1, 0}, {-2, 1}, {1, 2}}));
  CHECK(chi_y(line_bare()) == L({{1, 0}, {1, 1}}));
  CHECK(chi_y(quadric_toric()) == L({{1, 0}, {-2, 1}, {1, 2}}));
}

TEST_CASE("chi_y at y=0 recovers the arithmetic genus") {
  for (const PairData& p :
       {line_toric(), plane_toric(), line_bare(), quadric_toric()}) {
    Rational chi0 = chi_y(p).coeff(0);
    CHECK(chi0 == chow::integrate(tangent_todd(p), *p.ring));
    CHECK(chi0 == Rational(1));
  }
}

TEST_CASE("euler characteristic specialization") {
  auto e1 = euler_spec(line_toric(), 5);
  for (int m = 0; m <= 5; ++m) CHECK(e1.coeff(m) == Rational(0));
  auto e2 = euler_spec(plane_toric(), 3);
  for (int m = 0; m <= 3; ++m) CHECK(e2.coeff(m) == Rational(0));
  auto e3 = euler_spec(line_bare(), 4);
  CHECK(e3.coeff(0) == Rational(2));
  for (int m = 1; m <= 4; ++m) CHECK(e3.coeff(m) == Rational(0));
}

TEST_CASE("genus coefficients are integral on shipped pairs") {
  for (const PairData& p : {line_toric(), plane_toric(), line_bare()}) {
    auto g = elliptic_genus(p, 3);
    for (int m = 0; m <= 3; ++m)
      for (auto& [e, c] : g.coeff(m).terms()) CHECK(is_integer(c));
  }
}

TEST_CASE("ellipticity certificate for log Calabi-Yau pairs") {
  auto rep = check_ellipticity(elliptic_genus(line_toric(), 10), 1);
  CHECK(rep.passed);
  CHECK(rep.verified_order == 6);
  CHECK(rep.factor_exponent == 1);
  auto rep2 = check_ellipticity(elliptic_genus(plane_toric(), 6), 2);
  CHECK(rep2.passed);
  CHECK(rep2.verified_order >= 1);
}

TEST_CASE("ellipticity fails for the bare line with explicit witness") {
  auto rep = check_ellipticity(elliptic_genus(line_bare(), 4), 1);
  CHECK(!rep.passed);
  REQUIRE(rep.first_discrepancy.has_value());
  CHECK(rep.first_discrepancy->order == 0);
  CHECK(rep.first_discrepancy->y_exp == -1);
  CHECK(rep.first_discrepancy->lhs == Rational(-3));
  CHECK(rep.first_discrepancy->rhs == Rational(-1));
}

TEST_CASE("anticanonical check") {
  CHECK(anticanonical_check(line_toric()));
  CHECK(anticanonical_check(plane_toric()));
  CHECK(anticanonical_check(quadric_toric()));
  CHECK(!anticanonical_check(line_bare()));
  PairData one_point = line_toric();
  one_point.divisor_classes.pop_back();
  CHECK(!anticanonical_check(one_point));
}

TEST_CASE("shift factors multiply to (-y)^{-d} exactly when log CY") {
  using LElt = RingElement<LaurentY>;
  auto factor_product = [](const PairData& p) {
    auto lift = [&](const RElt& e) {
      return chow::exp_class(
          e.map_scalars([](const Rational& c) { return LaurentY(c); }));
    };
    int r = p.divisor_count();
    LElt out(p.ring, LaurentY::monomial(r % 2 == 0 ? 1 : -1, -r));
    for (const RElt& a : p.cotangent_roots)
      out = out * lift(-a).scaled(LaurentY::monomial(-1, -1));
    for (const RElt& a : p.cotangent_neg_roots)
      out = out * lift(a).scaled(LaurentY::monomial(-1, 1));
    for (const RElt& d : p.divisor_classes)
      out = out * lift(d).scaled(LaurentY::monomial(-1, 1));
    return out;
  };
  for (const PairData& p : {line_toric(), plane_toric(), quadric_toric()}) {
    LElt expected(p.ring, LaurentY::monomial(p.dimension % 2 == 0 ? 1 : -1,
                                             -p.dimension));
    CHECK(factor_product(p) == expected);
  }
  PairData one_point = line_toric();
  one_point.divisor_classes.pop_back();
  LElt expected(one_point.ring, LaurentY::monomial(-1, -1));
  CHECK(factor_product(one_point) != expected);
}

TEST_CASE("pair validation") {
  PairData p = line_toric();
  p.dimension = 2;
  CHECK_THROWS_AS(p.validate(), Error);
  PairData q = line_toric();
  q.cotangent_roots = {RElt(q.ring, 1)};
  CHECK_THROWS_AS(q.validate(), NonNilpotentInput);
  PairData r = line_toric();
  r.divisor_classes.push_back(RElt::generator(projective(2), "h"));
  CHECK_THROWS_AS(r.validate(), Error);
}
