#include "qcfa/proofsystems.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace qcfa;

namespace {

// Probability of an element on the normalized state (x0, x1, ...).
Rational element_weight(const OperationElement& e, const std::vector<Rational>& x) {
  const auto& f = *e.exact_form();
  Rational num = 0, den = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Rational r = 0;
    for (std::size_t j = 0; j < x.size(); ++j) r += f.matrix(i, j) * x[j];
    num += r * r;
    den += x[i] * x[i];
  }
  return f.scale_squared * num / den;
}

const OperationElement& element(const Superoperator& op, const std::string& label) {
  return op.elements().at(op.find(label));
}

}  // namespace

TEST_CASE("delta trace") {
  std::vector<bool> bits{true, false, true};
  auto d = delta_trace(Rational(1, 3), bits);
  REQUIRE(d.size() == 4);
  Rational x(1, 3);
  CHECK(d[0] == x);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    x = bits[i] ? Rational(4 * x - 1) : Rational(4 * x);
    CHECK(d[i + 1] == x);
  }
}

TEST_CASE("unary verifier operators") {
  VerifierSpec v = build_unary_verifier(Rational(1, 5));
  for (const auto& op : v.machine.operators()) CHECK(validate_superoperator(op).pass);
  for (Rational delta : {Rational(0), Rational(1, 7), Rational(1, 3)}) {
    std::vector<Rational> x{delta, Rational(1)};
    Rational d2 = delta * delta;
    CHECK(element_weight(element(verifier_operator(v, kProc0Op), "go"), x) == (16 * d2 + 1) / (16 * (d2 + 1)));
    Rational t = 4 * delta - 1;
    CHECK(element_weight(element(verifier_operator(v, kProc1Op), "go"), x) == (t * t + 1) / (18 * (d2 + 1)));
  }
  CHECK_THROWS_AS(build_unary_verifier(Rational(1, 2)), ContractError);
}

TEST_CASE("unary system: honest and final-bit provers") {
  LanguageOracle o = LanguageOracle::random("a", 12, 4);
  VerifierSpec v = build_unary_verifier(gamma_of(o).value);
  for (std::size_t n = 0; n <= 2; ++n) {
    std::string w(n, 'a');
    ProtocolResult h = run_protocol(v, honest_prover(o), w);
    ProtocolResult f = run_protocol(v, final_bit_adversary(o), w);
    if (o.member_at(n + 1)) {
      CHECK(h.overall_acceptance >= Rational(3, 4));
      CHECK(f.overall_acceptance <= Rational(3, 7));
    } else {
      CHECK(h.overall_acceptance <= Rational(3, 7));
    }
    CHECK(h.overall_acceptance == restart_acceptance_exact(h.exact));
  }
}

TEST_CASE("binary verifier operators") {
  VerifierSpec v = build_binary_verifier(Rational(1, 7));
  for (const auto& op : v.machine.operators()) CHECK(validate_superoperator(op).pass);
  CHECK_THROWS_AS(build_binary_verifier(Rational(1, 7), Rational(1)), CoefficientError);
  // ENCODE-1 maps (v0, v1, v2, v3) to (v0, v1, 2 v2 + v1, v3) before scaling.
  auto partial = binary_partial_elements(kEncode1Op, Rational(1, 5));
  const auto& enc = partial.at(0).exact_form()->matrix;
  CHECK(enc(2, 1) == 1);
  CHECK(enc(2, 2) == 2);
}

TEST_CASE("binary system on short inputs") {
  LanguageOracle o = LanguageOracle::random("01", 12, 2);
  VerifierSpec v = build_binary_verifier(gamma_of(o).value);
  for (const char* w : {"", "1"}) {
    ProtocolResult h = run_protocol(v, honest_prover(o), w);
    bool member = o.member_at(ref::binary_index(w));
    if (member) {
      CHECK(h.overall_acceptance >= Rational(3, 4));
    } else {
      CHECK(h.overall_acceptance <= Rational(3, 7));
    }
  }
}

TEST_CASE("exhaustive search on the empty input") {
  LanguageOracle o = LanguageOracle::empty("a", 12);
  VerifierSpec v = build_unary_verifier(gamma_of(o).value);
  AdversarySearchResult r = exhaustive_adversary_search(v, "", 2);
  CHECK(r.max_acceptance <= Rational(3, 7));
  CHECK(r.evaluated > 0);
  CHECK_THROWS_AS(exhaustive_adversary_search(v, "", 10, 3), ResourceError);
}
