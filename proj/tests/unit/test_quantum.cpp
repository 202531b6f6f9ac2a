#include "qcfa/quantum.hpp"

#include <doctest.h>

using namespace qcfa;

namespace {

RationalMatrix rm(std::initializer_list<std::initializer_list<long>> rows) {
  RationalMatrix m(rows.size(), rows.begin()->size());
  std::size_t i = 0;
  for (const auto& r : rows) {
    std::size_t j = 0;
    for (long x : r) m(i, j++) = Rational(x);
    ++i;
  }
  return m;
}

}  // namespace

TEST_CASE("measurement and coin are complete") {
  CHECK(validate_superoperator(basis_measurement(4)).pass);
  CHECK(validate_superoperator(fair_coin(2)).pass);
  CHECK(validate_superoperator(rotation_operator(SymbolicAngle::sqrt2_pi(1), "r")).pass);
}

TEST_CASE("an incomplete set fails validation with its residual") {
  Superoperator half("half", {OperationElement::exact("a", Rational(1, 2), rm({{1, 0}, {0, 1}}))});
  ValidationReport r = validate_superoperator(half);
  CHECK_FALSE(r.pass);
  CHECK(abs(r.residual_norm - Scalar(Rational(1, 2))) < Scalar::pow2(-150));
}

TEST_CASE("completion appends the square root of the residual") {
  // PROC-0 drawn as go = (1/4) diag(4, 1); the residual is diag(0, 15/16).
  Superoperator op = complete_superoperator(
      "p0", {OperationElement::exact("go", Rational(1, 16), rm({{4, 0}, {0, 1}}))}, "restart");
  REQUIRE(op.size() == 2);
  CHECK(validate_superoperator(op).pass);
  const Matrix& r = op.elements()[1].matrix();
  CHECK(abs(r(1, 1) - sqrt(Scalar(Rational(15, 16)))) < Scalar::pow2(-150));
  CHECK(abs(r(0, 0)) < Scalar::pow2(-150));
}

TEST_CASE("completion refuses coefficients that are too large") {
  std::vector<OperationElement> big{OperationElement::exact("go", Rational(1), rm({{2, 0}, {0, 1}}))};
  try {
    complete_superoperator("big", big, "restart");
    FAIL("expected CoefficientError");
  } catch (const CoefficientError& e) {
    CHECK(e.eigenvalue() == doctest::Approx(-3.0));
  }
}

TEST_CASE("outcome probabilities follow the Born rule") {
  // State (3,4)/5 measured in the computational basis.
  AmplitudeVector v = AmplitudeVector::unit({Scalar(3L), Scalar(4L)});
  auto outs = outcome_distribution(basis_measurement(2), v);
  REQUIRE(outs.size() == 2);
  CHECK(abs(outs[0].probability - Scalar(Rational(9, 25))) < Scalar::pow2(-150));
  CHECK(abs(outs[1].probability - Scalar(Rational(16, 25))) < Scalar::pow2(-150));
  CHECK(abs(outs[1].post_state.entries[1] - Scalar(1L)) < Scalar::pow2(-150));
  AmplitudeVector raw;
  raw.entries = {Scalar(2L), Scalar(0L)};
  CHECK_THROWS_AS(outcome_distribution(basis_measurement(2), raw), ContractError);
}

TEST_CASE("deferred rotations match applying them one by one") {
  QuantumRegister reg{AmplitudeVector::basis(2, 0), {}};
  Superoperator rot = rotation_operator(SymbolicAngle::sqrt2_pi(1), "rot");
  AmplitudeVector direct = AmplitudeVector::basis(2, 0);
  for (int i = 0; i < 25; ++i) {
    reg = branch(rot, reg).at(0).post;
    direct = apply_element(rot.elements()[0], direct);
  }
  AmplitudeVector lazy = reg.resolved();
  CHECK(abs(lazy.entries[0] - direct.entries[0]) < Scalar::pow2(-140));
  CHECK(abs(lazy.entries[1] - direct.entries[1]) < Scalar::pow2(-140));
}

TEST_CASE("superoperator construction errors") {
  CHECK_THROWS_AS(Superoperator("empty", {}), StructuralError);
  CHECK_THROWS_AS(Superoperator("dup", {OperationElement::exact("x", Rational(1, 2), rm({{1, 0}, {0, 1}})),
                                        OperationElement::exact("x", Rational(1, 2), rm({{1, 0}, {0, 1}}))}),
                  StructuralError);
  CHECK_THROWS_AS(Superoperator("mixed", {OperationElement::exact("x", Rational(1), rm({{1, 0}, {0, 1}})),
                                          OperationElement::exact("y", Rational(1), rm({{1}}))}),
                  StructuralError);
}
