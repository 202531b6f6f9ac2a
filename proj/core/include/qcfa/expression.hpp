#pragma once

// Tiny arithmetic grammar for matrix entries in machine-definition files:
//   expr  := term (('+' | '-') term)*
//   term  := unary (('*' | '/') unary)*
//   unary := '-' unary | atom
//   atom  := number | 'pi' | ('sqrt' | 'sin' | 'cos') '(' expr ')' | '(' expr ')'
// Numbers are integers or decimals ("7", "0.25", "1e-3").

#include "qcfa/numeric.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace qcfa {

/// Value of an expression. `exact` is present when the value is q*sqrt(s)
/// with rationals q and s >= 0, e.g. "sqrt(15)/4" -> (1/4, 15).
struct ExpressionValue {
  struct Surd {
    Rational coefficient;
    Rational radicand;
  };
  Scalar numeric;
  std::optional<Surd> exact;
};

/// Throws ParseError (line 1, column of the offending character).
ExpressionValue evaluate_expression(std::string_view text);

}  // namespace qcfa
