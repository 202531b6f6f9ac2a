#pragma once

// High-precision real scalars (MPFR) and exact rationals (GMP).
//
// Every Scalar is created at the calling thread's working precision. A
// PrecisionScope pins that precision for the duration of one evaluation so
// all arithmetic inside it uses a single setting.

#include <mpfr.h>
#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

namespace qcfa {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr long kDefaultPrecisionBits = 192;

/// Precision (in significand bits) used for newly created scalars on this thread.
long working_precision();

class PrecisionScope {
 public:
  explicit PrecisionScope(long bits);
  ~PrecisionScope();
  PrecisionScope(const PrecisionScope&) = delete;
  PrecisionScope& operator=(const PrecisionScope&) = delete;

 private:
  long saved_;
};

class Scalar {
 public:
  Scalar();
  Scalar(long value);  // NOLINT(google-explicit-constructor)
  Scalar(int value) : Scalar(static_cast<long>(value)) {}  // NOLINT
  explicit Scalar(const Rational& value);
  explicit Scalar(const Integer& value);
  explicit Scalar(double value);

  Scalar(const Scalar& other);
  Scalar(Scalar&& other) noexcept;
  Scalar& operator=(const Scalar& other);
  Scalar& operator=(Scalar&& other) noexcept;
  ~Scalar();

  /// Parses a decimal literal ("0.25", "-1e-3"). Throws std::invalid_argument.
  static Scalar parse(std::string_view text);
  static Scalar pi();
  /// 2^exponent, exact.
  static Scalar pow2(long exponent);

  Scalar& operator+=(const Scalar& rhs);
  Scalar& operator-=(const Scalar& rhs);
  Scalar& operator*=(const Scalar& rhs);
  Scalar& operator/=(const Scalar& rhs);

  friend Scalar operator+(Scalar lhs, const Scalar& rhs) { return lhs += rhs; }
  friend Scalar operator-(Scalar lhs, const Scalar& rhs) { return lhs -= rhs; }
  friend Scalar operator*(Scalar lhs, const Scalar& rhs) { return lhs *= rhs; }
  friend Scalar operator/(Scalar lhs, const Scalar& rhs) { return lhs /= rhs; }
  Scalar operator-() const;

  friend bool operator==(const Scalar& a, const Scalar& b);
  friend std::partial_ordering operator<=>(const Scalar& a, const Scalar& b);

  bool is_zero() const;
  int sign() const;
  long precision() const;
  double to_double() const;
  /// Base-2 exponent e with 2^(e-1) <= |x| < 2^e; LONG_MIN for zero.
  long exponent() const;

  /// Decimal rendering. digits == 0 picks enough digits to round-trip.
  std::string to_string(std::size_t digits = 0) const;

  mpfr_srcptr get() const { return value_; }
  mpfr_ptr get() { return value_; }

 private:
  mpfr_t value_;
};

Scalar sqrt(const Scalar& x);
Scalar sin(const Scalar& x);
Scalar cos(const Scalar& x);
Scalar log(const Scalar& x);
Scalar exp(const Scalar& x);
Scalar abs(const Scalar& x);
/// Remainder of x modulo m, in [0, m).
Scalar fmod_positive(const Scalar& x, const Scalar& m);
Scalar square(const Scalar& x);

/// 2^(-bits/2): the default comparison slack tied to a precision.
Scalar precision_tolerance(long bits);
Scalar precision_tolerance();

std::ostream& operator<<(std::ostream& os, const Scalar& x);

/// Exact rational from a string "p/q", "p", or a finite decimal "0.125".
Rational parse_rational(std::string_view text);
std::string to_string(const Rational& q);

}  // namespace qcfa
