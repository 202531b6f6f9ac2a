#include "qcfa/constructions.hpp"
#include "qcfa/engine.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace qcfa;

TEST_CASE("POWER-EQ machine on short inputs") {
  RecognizerBundle b = build_power_eq();
  for (const auto& op : b.spec.operators()) CHECK(validate_superoperator(op).pass);
  for (const char* w : {"", "a", "b", "ab", "aba", "abab", "abba", "abaaaaaaa"}) {
    RunResult r = run_exact(b.spec, w);
    CHECK(b.reference_membership(w) == ref::power_eq(w));
    CHECK(b.meets_claim(ref::power_eq(w), r.accept_prob, r.reject_prob));
  }
  std::string m = ref::member(0);
  RunResult r = run_exact(b.spec, m);
  CHECK(r.accept_prob == Scalar(1L));
  CHECK(r.reject_prob.is_zero());
}

TEST_CASE("claims with and without tolerance") {
  RecognizerBundle b = build_power_eq();
  b.claimed.member_accept = Rational(3, 4);
  b.claimed.member_strict = true;
  CHECK_FALSE(b.meets_claim(true, Scalar(Rational(3, 4)), Scalar(Rational(1, 4))));
  CHECK(b.meets_claim(true, Scalar(Rational(3, 4)), Scalar(Rational(1, 4)), Scalar(Rational(1, 100))));
}

TEST_CASE("stochastic machine agrees with its closed form") {
  LanguageOracle o = LanguageOracle::random("01", 6, 3);
  EncodedAngle theta = theta_of(o);
  RecognizerBundle b = build_stochastic_1qcfa(theta, o);
  for (const char* w : {"ab", "aba", "abaa", "abab"}) {
    RunResult r = run_exact(b.spec, w);
    StochasticEvaluation e = evaluate_stochastic(w, theta);
    CHECK(abs(r.accept_prob - e.acceptance) < Scalar::pow2(-120));
  }
  StochasticEvaluation e = evaluate_stochastic(ref::member(0), theta);
  CHECK(e.well_formed);
  CHECK(e.all_heads == Rational(1, 1 << 8));
}

TEST_CASE("UPOWER counter machine") {
  LanguageOracle o("a", {true, false, true, false, false, false, false, false, false, false, false, false});
  RecognizerBundle b = build_2qcca_upower(theta_of(o), o);
  for (std::size_t m : {1, 2, 7, 8, 9, 16, 64, 65}) {
    std::string w(m, 'a');
    RunResult r = run_exact(b.spec, w);
    bool member = ref::upower_L(w, o.bits());
    CHECK(b.reference_membership(w) == member);
    CHECK(b.meets_claim(member, r.accept_prob, r.reject_prob));
  }
}
