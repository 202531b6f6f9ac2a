#pragma once

// Rotation angles kept in closed form so that long runs of rotations compose
// without accumulated rounding error.

#include "qcfa/numeric.hpp"

#include <string>

namespace qcfa {

/// angle = 2*pi*turns + pi*sqrt(2)*sqrt2_halfturns.
///
/// `turns` is an exact rational; `sqrt2_halfturns` is an integer count of
/// sqrt(2)*pi rotations. Composition is exact addition; reduction modulo
/// 2*pi happens once, when the angle is turned into a matrix.
struct SymbolicAngle {
  Rational turns{0};
  Integer sqrt2_halfturns{0};

  static SymbolicAngle from_turns(const Rational& t) { return {t, 0}; }
  static SymbolicAngle sqrt2_pi(long count) { return {Rational(0), Integer(count)}; }

  bool is_zero() const;
  /// True when the reduced angle is exactly 0 mod 2*pi.
  bool is_identity() const;

  SymbolicAngle& operator+=(const SymbolicAngle& rhs);
  friend SymbolicAngle operator+(SymbolicAngle a, const SymbolicAngle& b) { return a += b; }
  SymbolicAngle operator-() const;
  friend SymbolicAngle operator*(const Integer& k, const SymbolicAngle& a);
  friend bool operator==(const SymbolicAngle& a, const SymbolicAngle& b);

  /// Reduced value in [0, 2*pi) at the working precision.
  Scalar radians() const;
  std::string to_string() const;
};

}  // namespace qcfa
