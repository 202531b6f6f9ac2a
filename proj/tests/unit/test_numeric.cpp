#include "qcfa/angle.hpp"
#include "qcfa/errors.hpp"
#include "qcfa/expression.hpp"
#include "qcfa/linalg.hpp"
#include "qcfa/numeric.hpp"

#include <doctest.h>

#include <cmath>

using namespace qcfa;

TEST_CASE("precision scope restores the previous precision") {
  const long before = working_precision();
  {
    PrecisionScope s(300);
    CHECK(working_precision() == 300);
    CHECK(Scalar(1L).precision() == 300);
  }
  CHECK(working_precision() == before);
  CHECK_THROWS_AS(PrecisionScope(0), std::invalid_argument);
}

TEST_CASE("scalar arithmetic agrees with doubles at low precision") {
  const Scalar x = Scalar::parse("0.3"), y = Scalar::parse("1.7");
  CHECK((x * y).to_double() == doctest::Approx(0.51));
  CHECK((x / y).to_double() == doctest::Approx(0.3 / 1.7));
  CHECK(sqrt(Scalar(2L)).to_double() == doctest::Approx(std::sqrt(2.0)));
  CHECK((sin(Scalar::pi() / Scalar(6L))).to_double() == doctest::Approx(0.5));
  CHECK_THROWS(Scalar(1L) / Scalar(0L));
  CHECK_THROWS(sqrt(Scalar(-1L)));
}

TEST_CASE("scalar decimal output round-trips") {
  const Scalar third = Scalar(Rational(1, 3));
  CHECK(Scalar::parse(third.to_string()) == third);
  CHECK(Scalar(Rational(1, 4)).to_string() == "0.25");
  CHECK(Scalar(0L).to_string() == "0");
  CHECK(Scalar::pow2(-100).to_string(3) == "7.89e-31");
}

TEST_CASE("rationals parse in base ten") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("0.0789") == Rational(789, 10000));
  CHECK(parse_rational("-1.25") == Rational(-5, 4));
  CHECK(parse_rational("08") == Rational(8));
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("x"));
}

TEST_CASE("symbolic angles compose exactly") {
  SymbolicAngle a = SymbolicAngle::sqrt2_pi(3), b = SymbolicAngle::sqrt2_pi(-3);
  CHECK((a + b).is_zero());
  CHECK(SymbolicAngle::from_turns(Rational(5, 4)).is_identity() == false);
  CHECK(SymbolicAngle::from_turns(Rational(2)).is_identity());
  // sqrt(2)*pi*7 reduced mod 2*pi, computed independently.
  const double raw = std::sqrt(2.0) * M_PI * 7;
  CHECK((Integer(7) * SymbolicAngle::sqrt2_pi(1)).radians().to_double() ==
        doctest::Approx(std::fmod(raw, 2 * M_PI)));
}

TEST_CASE("jacobi eigenvalues of a known symmetric matrix") {
  // [[16,-4],[-4,2]] has eigenvalues 9 +- sqrt(65).
  Matrix m(2, 2);
  m(0, 0) = Scalar(16L);
  m(0, 1) = Scalar(-4L);
  m(1, 0) = Scalar(-4L);
  m(1, 1) = Scalar(2L);
  SymmetricEigen e = symmetric_eigen(m);
  REQUIRE(e.values.size() == 2);
  CHECK(abs(e.values[1] - (Scalar(9L) + sqrt(Scalar(65L)))) < Scalar::pow2(-150));
  CHECK(abs(e.values[0] - (Scalar(9L) - sqrt(Scalar(65L)))) < Scalar::pow2(-150));
  // Reconstruct A = V diag V^T.
  Matrix d(2, 2);
  d(0, 0) = e.values[0];
  d(1, 1) = e.values[1];
  Matrix back = e.vectors * d * e.vectors.transpose();
  CHECK(max_abs_entry(back - m) < Scalar::pow2(-150));
}

TEST_CASE("expression grammar") {
  auto v = evaluate_expression("sqrt(15)/4");
  REQUIRE(v.exact);
  CHECK(v.exact->coefficient == Rational(1, 4));
  CHECK(v.exact->radicand == Rational(15));
  CHECK(evaluate_expression("2*pi").numeric.to_double() == doctest::Approx(2 * M_PI));
  CHECK_FALSE(evaluate_expression("sqrt(2)*pi").exact);
  CHECK(evaluate_expression("1e-3").exact->coefficient == Rational(1, 1000));
  CHECK(evaluate_expression("-(1/3) + 1").exact->coefficient == Rational(2, 3));
  try {
    evaluate_expression("1 + * 2");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 1);
    CHECK(e.column() == 5);
  }
}
