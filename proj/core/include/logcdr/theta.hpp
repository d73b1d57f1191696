#pragma once

#include "logcdr/series.hpp"

namespace logcdr::qseries {

/* theta~(q,y) = prod_{j=1..N+1} (1 - q^{j-1} y)(1 - q^j y^{-1}), truncated
 * at q^N. The j-1 = 0 factor contributes the q^0 term (1 - y). */
TruncatedSeries<LaurentY> theta_tilde(int N);

/* theta~_+(q,y) = prod_{j>=1} (1 - q^j y)(1 - q^j y^{-1}) truncated;
 * (1 - y) * theta_plus(N) = theta_tilde(N) exactly. */
TruncatedSeries<LaurentY> theta_plus(int N);

/* G(q,y) = theta~(q,y) / theta~_+(q,1); q^0 coefficient is 1 - y. */
TruncatedSeries<LaurentY> g_series(int N);

/* The product-form route: prod (1-q^{j-1}y)(1-q^j y^{-1}) / prod (1-q^j)^2.
 * Agrees with g_series; kept separate so the two derivations stay
 * independently testable. */
TruncatedSeries<LaurentY> g_series_product_form(int N);

}  // namespace logcdr::qseries
