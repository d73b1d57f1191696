#pragma once

#include <string>
#include <string_view>

#include "logcdr/series.hpp"

namespace logcdr::qseries {

/* Canonical text format, the golden-file contract: one line per q-order,
 *   q^m: <y-monomials ascending by exponent>
 * with coefficients as p/q (no spaces inside), `c*y^e` per monomial, the
 * y^0 term as a bare scalar, and `0` for a zero coefficient. */
std::string serialize_series(const TruncatedSeries<LaurentY>& s);
std::string serialize_laurent(const LaurentY& v);

/* Inverse of serialize_series. Lines must cover q^0..q^N contiguously.
 * Throws ConfigError with line/column diagnostics. */
TruncatedSeries<LaurentY> parse_series(std::string_view text);
LaurentY parse_laurent_fragment(std::string_view text, int line_no = 1,
                                int col0 = 1);

}  // namespace logcdr::qseries
