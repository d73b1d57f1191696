#pragma once

#include <string>
#include <vector>

#include "logcdr/chow.hpp"
#include "logcdr/series.hpp"
#include "logcdr/theta.hpp"

namespace logcdr::genus {

using chow::RingElement;
using chow::RingSpec;
using chow::RingSpecPtr;
using qseries::LaurentY;
using qseries::RationalFunctionY;
using qseries::TruncatedSeries;

using RElt = RingElement<Rational>;
using LRingSeries = TruncatedSeries<RingElement<LaurentY>>;
using FRingSeries = TruncatedSeries<RingElement<RationalFunctionY>>;

/* Log pair (X, D): a truncated cohomology ring, Chern roots of the
 * cotangent bundle, and the divisor component classes c1(O(-D_j)).
 * cotangent_neg_roots allows a virtual presentation of the cotangent bundle
 * (Euler-sequence style) when honest roots do not exist in the ring;
 * roots count pos - neg = dimension. */
struct PairData {
  int dimension = 0;
  RingSpecPtr ring;
  std::vector<RElt> cotangent_roots;
  std::vector<RElt> cotangent_neg_roots;
  std::vector<RElt> divisor_classes;
  std::string name;

  int divisor_count() const { return static_cast<int>(divisor_classes.size()); }
  void validate() const;  // throws Error on shape violations
};

/* Virtual bundle [sum L(pos)] - [sum L(neg)] + shift * [O] given by Chern
 * roots of the line summands. */
struct KClass {
  std::vector<RElt> positive_roots;
  std::vector<RElt> negative_roots;
  int trivial_rank_shift = 0;
};

using EllipticityReport = qseries::ShiftCompareReport;

/* Chern character of the elliptic bundle attached to a sum of line bundles
 * with the given roots: per root, theta_tilde(q, y e^eps) divided by
 * theta_plus(q, e^eps). Denominator inversion is possible because each q^0
 * term is 1 + nilpotent; the result carries no y-denominators. */
LRingSeries ell_of_bundle(const RingSpecPtr& ring,
                          const std::vector<RElt>& roots, int order);

/* Multiplicative extension to K-theory: positive part over negative part,
 * times G(q,y)^shift. Negative parts introduce (1 - y e^delta)-type
 * denominators, hence rational-function coefficients. */
FRingSeries lambda_ell(const RingSpecPtr& ring, const KClass& k, int order);

/* Class of the log cotangent bundle from the residue exact sequence:
 * positive roots from Omega_X, each divisor contributing [O] - [O(-D_j)]. */
KClass log_cotangent_class(const PairData& p);

/* Todd class of the tangent bundle (roots are the negated cotangent data). */
RElt tangent_todd(const PairData& p);

/* The elliptic genus of the pair: the lambda_ell class of the log cotangent
 * bundle integrated against Td(X), one exact Laurent polynomial per q-order.
 * Throws DenominatorNotClearing if a coefficient fails to reduce. */
TruncatedSeries<LaurentY> elliptic_genus(const PairData& p, int order);

/* q = 0 specialization; internally cross-checked against the direct
 * chi_y computation integrate(ch(wedge_{-y} Omega(log D)) Td). */
LaurentY chi_y(const PairData& p);

/* y = 1 specialization; asserts the q^0 value agrees with the Euler number
 * obtained from chi_y. */
TruncatedSeries<Rational> euler_spec(const PairData& p, int order);

/* Jacobi-type shift certificate: compares s(q, qy) with (-y)^{-d} s(q, y)
 * on the truncation-certified zone. */
EllipticityReport check_ellipticity(const TruncatedSeries<LaurentY>& s, int d);

/* Log Calabi-Yau test: sum of cotangent roots equals sum of divisor
 * classes (virtual corrections subtracted from the left side). */
bool anticanonical_check(const PairData& p);

}  // namespace logcdr::genus
