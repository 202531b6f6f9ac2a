#pragma once

// Finite-depth language oracles, lexicographic enumeration, the angle and
// bias encodings of a language, the POWER-EQ / UPOWER families, and honest
// prover transmissions.

#include "qcfa/angle.hpp"
#include "qcfa/numeric.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qcfa {

inline constexpr const char* kUnaryAlphabet = "a";
inline constexpr const char* kBinaryAlphabet = "01";
/// Separator between a string and its membership bit in binary transmissions
/// (rendered as U+2021 DOUBLE DAGGER).
inline constexpr char kDagger = '|';
inline constexpr char kBlockStart = '#';
inline constexpr std::size_t kDefaultGuardBand = 8;

/// i-th string (i >= 1) in length-then-lexicographic order over `alphabet`.
std::string lex_string(std::string_view alphabet, std::uint64_t i);
/// Inverse of lex_string.
std::uint64_t lex_index(std::string_view alphabet, std::string_view s);

/// Membership bits for indices 1..depth. Index i stands for the string
/// lex_string(alphabet, i) under lexicographic indexing, or for the natural
/// number i under natural indexing; the oracle itself is the same table.
class LanguageOracle {
 public:
  LanguageOracle(std::string alphabet, std::vector<bool> bits);

  static LanguageOracle from_predicate(std::string alphabet, std::size_t depth,
                                       const std::function<bool(const std::string&)>& member);
  static LanguageOracle random(std::string alphabet, std::size_t depth, std::uint64_t seed);
  static LanguageOracle empty(std::string alphabet, std::size_t depth);
  static LanguageOracle full(std::string alphabet, std::size_t depth);

  const std::string& alphabet() const { return alphabet_; }
  std::size_t depth() const { return bits_.size(); }
  const std::vector<bool>& bits() const { return bits_; }
  /// Largest index covered with the guard band kept in reserve.
  std::size_t guarded_depth(std::size_t guard = kDefaultGuardBand) const;

  /// Bit for index i; throws OutOfRangeError outside 1..depth.
  bool member_at(std::uint64_t i) const;
  /// Lexicographic indexing.
  bool contains(std::string_view s) const;
  /// Natural-number indexing: is n in L?
  bool contains_number(std::uint64_t n) const { return member_at(n); }
  /// +1 for members, -1 otherwise.
  int sign_at(std::uint64_t i) const { return member_at(i) ? 1 : -1; }

  LanguageOracle with_bit(std::uint64_t i, bool value) const;

 private:
  std::string alphabet_;
  std::vector<bool> bits_;
};

/// theta = 2*pi * numerator / 8^(depth+1).
struct EncodedAngle {
  Integer numerator;
  std::size_t depth = 0;

  Rational turns() const;
  SymbolicAngle angle() const { return SymbolicAngle::from_turns(turns()); }
  /// k * theta reduced to [0, 1) turns, exactly.
  Rational multiple_turns(const Integer& k) const;
};

/// gamma = sum of G(i)/4^i, exact.
struct EncodedBias {
  Rational value;
  std::size_t depth = 0;
};

EncodedAngle theta_of(const LanguageOracle& oracle);
EncodedBias gamma_of(const LanguageOracle& oracle);

struct PowerEqParse {
  bool malformed = true;  // not of the shape a b a+ (b a+)*
  bool form_ok = false;   // a b a^7 b a^(7 t1) ... b a^(7 tn), n > 0, every t_i a positive multiple of 8
  bool member = false;
  std::vector<std::uint64_t> blocks;  // a-counts of the blocks after the first b
  std::uint64_t a_count = 0;
};

PowerEqParse power_eq_parse(std::string_view w);
/// log_8 of the a-count of a POWER-EQ member (n + 1 for the member with n+1 blocks).
std::uint64_t power_eq_level(const PowerEqParse& p);
bool power_eq_L_member(std::string_view w, const LanguageOracle& oracle);
/// a^k with k = 8^n, n >= 0.
bool upower_member(std::string_view w);
/// a^(8^n) with n in L (natural-number indexing).
bool upower_L_member(std::string_view w, const LanguageOracle& oracle);

/// The POWER-EQ member with n+1 blocks after the first b: a b a^7 b a^56 ...
std::string power_eq_member(std::size_t n);

/// Unary: G(eps) G(a) ... G(a^n).
std::string honest_unary_transmission(const LanguageOracle& oracle, std::size_t n);
/// Binary: #s|G(s) for every s up to w in lexicographic order.
std::string honest_binary_transmission(const LanguageOracle& oracle, std::string_view w);
/// Replaces the internal separator by the double dagger.
std::string render_transmission(std::string_view t);

/// (string, bit) pairs recovered from a transmission; nullopt when malformed.
std::optional<std::vector<std::pair<std::string, bool>>> decode_unary_transmission(std::string_view t);
std::optional<std::vector<std::pair<std::string, bool>>> decode_binary_transmission(std::string_view t);

}  // namespace qcfa
