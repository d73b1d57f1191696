#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "logcdr/vertex.hpp"

namespace logcdr::vertex {

/* Expression language for states over a bracket engine.
 *
 *   expr    := term { ('+' | '-') term }
 *   term    := factor { '*' factor }
 *   factor  := ['-'] primary
 *   primary := INT [ '/' INT ]                exact rational scalar
 *            | 'vac' | 'zero' | 'L' | 'J' | 'Q' | 'G'
 *            | FIELD                          gamma, beta, c, b
 *            | 'pow' '(' FIELD ',' INT ')'    gamma powers only
 *            | 'nop' '(' expr ',' expr ')'
 *            | 'prod' '(' expr ',' expr ',' INT ')'
 *            | 'D' '(' expr [ ',' INT ] ')'
 *            | '(' expr ')'
 *   FIELD   := ('gamma' | 'beta' | 'c' | 'b') [ '_' INT ]
 *
 * A field without a suffix means index 1. A bare scalar denotes that
 * multiple of the vacuum, so `pow(gamma,-1) - 1` is well formed; `*` takes
 * at least one scalar operand, state products are spelled nop or prod.
 * Problems are reported as ConfigError carrying the 1-based line passed in
 * and the column within src. */
VState parse_state(Engine& e, std::string_view src, int line = 1);

/* One checked identity of a verification suite. */
struct SuiteCheck {
  int line = 0;
  std::string lhs_src;
  std::string rhs_src;
  CheckResult result;
};

/* A suite file declares its engine then lists identities:
 *
 *   @engine rank=1 localization=1
 *   # brackets of the structure current
 *   prod(Q, G, 0) == L
 *   prod(Q, G, 1) == J
 *
 * '#' starts a comment, blank lines are skipped, every identity line
 * contains exactly one '=='. */
struct SuiteReport {
  int rank = 0;
  int localization = 0;
  std::vector<SuiteCheck> checks;
  bool all_equal() const;
  size_t failures() const;
};

SuiteReport run_suite(std::istream& in);
SuiteReport run_suite(std::string_view text);

}  // namespace logcdr::vertex
