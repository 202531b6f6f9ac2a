#include "qcfa/errors.hpp"
#include "qcfa/languages.hpp"
#include "reference.hpp"

#include <doctest.h>

using namespace qcfa;

TEST_CASE("lexicographic order starts with the empty string") {
  for (std::uint64_t i = 1; i <= 200; ++i) {
    CHECK(lex_string(kBinaryAlphabet, i) == ref::binary_string(i));
    CHECK(lex_index(kBinaryAlphabet, ref::binary_string(i)) == i);
  }
  CHECK(lex_string(kUnaryAlphabet, 4) == "aaa");
}

TEST_CASE("oracle bits and depth") {
  LanguageOracle o("01", {true, false, true});
  CHECK(o.member_at(1));
  CHECK_FALSE(o.member_at(2));
  CHECK(o.contains(""));
  CHECK_FALSE(o.contains("0"));
  CHECK(o.contains("1"));
  CHECK_THROWS_AS(o.member_at(0), OutOfRangeError);
  CHECK_THROWS_AS(o.member_at(4), OutOfRangeError);
  CHECK(LanguageOracle::random("01", 20, 5).bits() == LanguageOracle::random("01", 20, 5).bits());
  CHECK(LanguageOracle::random("01", 20, 5).bits() != LanguageOracle::random("01", 20, 6).bits());
  CHECK(LanguageOracle::full("a", 20).guarded_depth() == 12);
}

TEST_CASE("gamma is the base-4 expansion of the bits") {
  LanguageOracle o("a", {true, false, true});
  CHECK(gamma_of(o).value == Rational(1, 4) + Rational(1, 64));
  // All ones approach 1/3 from below.
  CHECK(gamma_of(LanguageOracle::full("a", 10)).value < Rational(1, 3));
}

TEST_CASE("theta isolates digit j after 8^j rotations") {
  LanguageOracle o("01", {true, false, false, true, true});
  EncodedAngle t = theta_of(o);
  Integer k = 1;
  for (std::size_t j = 1; j <= 3; ++j) {
    k *= 8;
    Rational turns = t.multiple_turns(k);
    // Digit +1 leaves about 1/8 turn, digit -1 about 7/8.
    Rational expect = o.member_at(j) ? Rational(1, 8) : Rational(7, 8);
    Rational diff = turns - expect;
    CHECK(abs(diff) < Rational(1, 56));
  }
}

TEST_CASE("POWER-EQ parsing agrees with the reference") {
  for (std::size_t n = 0; n <= 3; ++n) {
    auto p = power_eq_parse(ref::member(n));
    CHECK(p.member);
    CHECK(power_eq_level(p) == n + 1);
  }
  for (const char* w : {"", "ab", "aba", "abaaaaaaab", "aba^7", "baaaaaaaa", "abaaaaaaaba"}) {
    CHECK(power_eq_parse(w).member == ref::power_eq(w));
  }
  std::string nonmember = ref::member(1);
  nonmember.pop_back();
  CHECK_FALSE(power_eq_parse(nonmember).member);
  CHECK(power_eq_parse("ab" + std::string(7, 'a') + "b" + std::string(112, 'a')).form_ok);
}

TEST_CASE("UPOWER membership") {
  LanguageOracle o("01", {true, false, true});
  for (std::uint64_t m : {1, 7, 8, 9, 63, 64, 512, 513}) {
    CHECK(upower_L_member(std::string(m, 'a'), o) == ref::upower_L(std::string(m, 'a'), o.bits()));
  }
  CHECK(upower_member("a"));
  CHECK_FALSE(upower_L_member("a", o));
}

TEST_CASE("honest transmissions decode back to the oracle") {
  LanguageOracle o = LanguageOracle::random("01", 12, 9);
  auto blocks = decode_binary_transmission(honest_binary_transmission(o, "10"));
  REQUIRE(blocks);
  REQUIRE(blocks->size() == ref::binary_index("10"));
  for (std::size_t i = 0; i < blocks->size(); ++i) {
    CHECK((*blocks)[i].first == ref::binary_string(i + 1));
    CHECK((*blocks)[i].second == o.member_at(i + 1));
  }
  LanguageOracle u = LanguageOracle::random("a", 12, 9);
  std::string t = honest_unary_transmission(u, 4);
  CHECK(t.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) CHECK((t[i] == '1') == u.member_at(i + 1));
  CHECK(render_transmission("#0|1") == "#0‡1");
}
