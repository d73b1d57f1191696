#pragma once

#include <stdexcept>
#include <string>

namespace logcdr {

/* Base for every error thrown by the library. Subclasses exist so callers
 * can distinguish input problems from mathematical failures. */
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/* q^0 coefficient of a divisor is not a unit in the coefficient ring. */
struct NonUnitConstantTerm : Error {
  using Error::Error;
};

/* A monomial q^m y^p would map to a negative q-power under y -> q^k y. */
struct NegativeQPower : Error {
  using Error::Error;
};

/* The y-degree window leaves no order certifiable under y -> q^k y. */
struct EmptyVerifiableRange : Error {
  using Error::Error;
};

/* exp/todd input has a nonzero degree-0 component. */
struct NonNilpotentInput : Error {
  using Error::Error;
};

/* Rewrite system failed the termination order or cycled. */
struct NonTerminatingRules : Error {
  using Error::Error;
};

/* A q-order coefficient of the genus failed to reduce to a Laurent
 * polynomial in y. */
struct DenominatorNotClearing : Error {
  using Error::Error;
};

/* Truncated inverse series too short for the requested substitution. */
struct DegreeCapExceeded : Error {
  using Error::Error;
};

/* Vertex states built over different (rank, localization) contexts. */
struct LocalizationMismatch : Error {
  using Error::Error;
};

/* A coordinate change does not preserve the divisor ideal. */
struct DivisorNotPreserved : Error {
  using Error::Error;
};

/* Jet order above the algebra's truncation K. */
struct TruncationExceeded : Error {
  using Error::Error;
};

/* Derivation is not tangent to the divisor image. */
struct NotTangent : Error {
  using Error::Error;
};

/* Pullback of a divisor coordinate fails to generate a divisorial ideal. */
struct NotDivisorial : Error {
  using Error::Error;
};

/* Input file diagnostics carry position information. */
struct ConfigError : Error {
  int line;
  int col;
  ConfigError(int line_, int col_, const std::string& what_)
      : Error("line " + std::to_string(line_) + ", col " +
              std::to_string(col_) + ": " + what_),
        line(line_),
        col(col_) {}
};

}  // namespace logcdr
