#include "qcfa/languages.hpp"

#include "qcfa/errors.hpp"

#include <random>

namespace qcfa {
namespace {

Integer pow_ui(unsigned long base, unsigned long exp) {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, exp);
  return r;
}

}  // namespace

std::string lex_string(std::string_view alphabet, std::uint64_t i) {
  if (i == 0) throw ContractError("lexicographic indices start at 1");
  const std::uint64_t k = alphabet.size();
  if (k == 0) throw ContractError("empty alphabet");
  if (k == 1) return std::string(i - 1, alphabet[0]);
  // Bijective base-k numeral of i-1 with digits shifted: same as writing i in
  // base k with an implicit leading 1 when k = 2.
  std::string out;
  std::uint64_t x = i - 1;
  std::uint64_t len = 0, count = 1;
  while (x >= count) {
    x -= count;
    count *= k;
    ++len;
  }
  out.assign(len, alphabet[0]);
  for (std::uint64_t pos = len; pos-- > 0;) {
    out[pos] = alphabet[x % k];
    x /= k;
  }
  return out;
}

std::uint64_t lex_index(std::string_view alphabet, std::string_view s) {
  const std::uint64_t k = alphabet.size();
  if (k == 0) throw ContractError("empty alphabet");
  std::uint64_t offset = 0, count = 1, value = 0;
  for (std::size_t len = 0; len < s.size(); ++len) {
    offset += count;
    count *= k;
  }
  for (char c : s) {
    auto d = alphabet.find(c);
    if (d == std::string_view::npos) throw ContractError(std::string("symbol '") + c + "' is not in the alphabet");
    value = value * k + d;
  }
  return offset + value + 1;
}

LanguageOracle::LanguageOracle(std::string alphabet, std::vector<bool> bits)
    : alphabet_(std::move(alphabet)), bits_(std::move(bits)) {
  if (alphabet_.empty()) throw ContractError("oracle alphabet is empty");
  if (bits_.empty()) throw ContractError("oracle depth must be positive");
}

LanguageOracle LanguageOracle::from_predicate(std::string alphabet, std::size_t depth,
                                              const std::function<bool(const std::string&)>& member) {
  std::vector<bool> bits(depth);
  for (std::size_t i = 1; i <= depth; ++i) bits[i - 1] = member(lex_string(alphabet, i));
  return LanguageOracle(std::move(alphabet), std::move(bits));
}

LanguageOracle LanguageOracle::random(std::string alphabet, std::size_t depth, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<bool> bits(depth);
  for (std::size_t i = 0; i < depth; ++i) bits[i] = (rng() >> 63) != 0;
  return LanguageOracle(std::move(alphabet), std::move(bits));
}

LanguageOracle LanguageOracle::empty(std::string alphabet, std::size_t depth) {
  return LanguageOracle(std::move(alphabet), std::vector<bool>(depth, false));
}

LanguageOracle LanguageOracle::full(std::string alphabet, std::size_t depth) {
  return LanguageOracle(std::move(alphabet), std::vector<bool>(depth, true));
}

std::size_t LanguageOracle::guarded_depth(std::size_t guard) const {
  return bits_.size() > guard ? bits_.size() - guard : 0;
}

bool LanguageOracle::member_at(std::uint64_t i) const {
  if (i == 0 || i > bits_.size()) {
    throw OutOfRangeError("index " + std::to_string(i) + " is outside the oracle depth " + std::to_string(bits_.size()));
  }
  return bits_[i - 1];
}

bool LanguageOracle::contains(std::string_view s) const { return member_at(lex_index(alphabet_, s)); }

LanguageOracle LanguageOracle::with_bit(std::uint64_t i, bool value) const {
  member_at(i);
  LanguageOracle copy = *this;
  copy.bits_[i - 1] = value;
  return copy;
}

Rational EncodedAngle::turns() const {
  Rational q(numerator, pow_ui(8, depth + 1));
  q.canonicalize();
  return q;
}

Rational EncodedAngle::multiple_turns(const Integer& k) const {
  Integer den = pow_ui(8, depth + 1);
  Integer num = k * numerator;
  Integer r;
  mpz_fdiv_r(r.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  Rational q(r, den);
  q.canonicalize();
  return q;
}

EncodedAngle theta_of(const LanguageOracle& oracle) {
  EncodedAngle a;
  a.depth = oracle.depth();
  for (std::size_t i = 1; i <= a.depth; ++i) {
    Integer term = pow_ui(8, a.depth - i);
    if (oracle.member_at(i)) {
      a.numerator += term;
    } else {
      a.numerator -= term;
    }
  }
  return a;
}

EncodedBias gamma_of(const LanguageOracle& oracle) {
  EncodedBias b;
  b.depth = oracle.depth();
  Integer num = 0;
  for (std::size_t i = 1; i <= b.depth; ++i)
    if (oracle.member_at(i)) num += pow_ui(4, b.depth - i);
  b.value = Rational(num, pow_ui(4, b.depth));
  b.value.canonicalize();
  return b;
}

PowerEqParse power_eq_parse(std::string_view w) {
  PowerEqParse p;
  if (w.size() < 3 || w[0] != 'a' || w[1] != 'b') return p;
  std::uint64_t run = 0;
  for (std::size_t i = 2; i < w.size(); ++i) {
    if (w[i] == 'a') {
      ++run;
    } else if (w[i] == 'b') {
      if (run == 0) return p;
      p.blocks.push_back(run);
      run = 0;
    } else {
      return p;
    }
  }
  if (run == 0) return p;
  p.blocks.push_back(run);
  p.malformed = false;
  p.a_count = 1;
  for (auto b : p.blocks) p.a_count += b;

  p.form_ok = p.blocks.size() >= 2 && p.blocks[0] == 7;
  for (std::size_t i = 1; p.form_ok && i < p.blocks.size(); ++i)
    if (p.blocks[i] % 56 != 0) p.form_ok = false;

  p.member = true;
  std::uint64_t expect = 7;
  for (auto b : p.blocks) {
    if (b != expect) {
      p.member = false;
      break;
    }
    if (expect > (UINT64_MAX >> 4)) {
      p.member = false;
      break;
    }
    expect *= 8;
  }
  return p;
}

std::uint64_t power_eq_level(const PowerEqParse& p) {
  if (!p.member) throw ContractError("power_eq_level on a non-member");
  return p.blocks.size();
}

bool power_eq_L_member(std::string_view w, const LanguageOracle& oracle) {
  PowerEqParse p = power_eq_parse(w);
  if (!p.member) return false;
  return oracle.member_at(power_eq_level(p));
}

bool upower_member(std::string_view w) {
  for (char c : w)
    if (c != 'a') return false;
  std::uint64_t m = w.size();
  if (m == 0) return false;
  while (m % 8 == 0) m /= 8;
  return m == 1;
}

bool upower_L_member(std::string_view w, const LanguageOracle& oracle) {
  if (!upower_member(w)) return false;
  std::uint64_t n = 0;
  for (std::uint64_t m = w.size(); m > 1; m /= 8) ++n;
  // The oracle is indexed from 1, so a^1 (the number 0) is never in the language.
  return n > 0 && oracle.contains_number(n);
}

std::string power_eq_member(std::size_t n) {
  std::string w = "ab";
  std::uint64_t block = 7;
  for (std::size_t i = 0; i <= n; ++i) {
    if (i > 0) w += 'b';
    w.append(block, 'a');
    block *= 8;
  }
  return w;
}

std::string honest_unary_transmission(const LanguageOracle& oracle, std::size_t n) {
  std::string t;
  for (std::size_t i = 1; i <= n + 1; ++i) t += oracle.member_at(i) ? '1' : '0';
  return t;
}

std::string honest_binary_transmission(const LanguageOracle& oracle, std::string_view w) {
  const std::uint64_t last = lex_index(kBinaryAlphabet, w);
  std::string t;
  for (std::uint64_t i = 1; i <= last; ++i) {
    bool bit = oracle.member_at(i);
    t += kBlockStart;
    t += lex_string(kBinaryAlphabet, i);
    t += kDagger;
    t += bit ? '1' : '0';
  }
  return t;
}

std::string render_transmission(std::string_view t) {
  std::string out;
  for (char c : t) {
    if (c == kDagger) {
      out += "‡";
    } else {
      out += c;
    }
  }
  return out;
}

std::optional<std::vector<std::pair<std::string, bool>>> decode_unary_transmission(std::string_view t) {
  std::vector<std::pair<std::string, bool>> out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] != '0' && t[i] != '1') return std::nullopt;
    out.emplace_back(std::string(i, 'a'), t[i] == '1');
  }
  return out;
}

std::optional<std::vector<std::pair<std::string, bool>>> decode_binary_transmission(std::string_view t) {
  std::vector<std::pair<std::string, bool>> out;
  std::size_t i = 0;
  while (i < t.size()) {
    if (t[i] != kBlockStart) return std::nullopt;
    ++i;
    std::string s;
    while (i < t.size() && (t[i] == '0' || t[i] == '1')) s += t[i++];
    if (i + 1 >= t.size() || t[i] != kDagger || (t[i + 1] != '0' && t[i + 1] != '1')) return std::nullopt;
    out.emplace_back(std::move(s), t[i + 1] == '1');
    i += 2;
  }
  return out;
}

}  // namespace qcfa
