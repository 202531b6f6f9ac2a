#pragma once

// Reference answers computed without the library's own parsers or encoders.

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ref {

// Block lengths of a b a^k0 b a^k1 ..., or nullopt for any other shape.
inline std::optional<std::vector<std::uint64_t>> blocks(std::string_view w) {
  if (w.size() < 3 || w.substr(0, 2) != "ab") return std::nullopt;
  std::vector<std::uint64_t> out{0};
  for (std::size_t i = 2; i < w.size(); ++i) {
    if (w[i] == 'a') {
      ++out.back();
    } else if (w[i] == 'b' && out.back() > 0) {
      out.push_back(0);
    } else {
      return std::nullopt;
    }
  }
  if (out.back() == 0) return std::nullopt;
  return out;
}

// Number of blocks after the first b when w is in POWER-EQ, else 0.
inline std::size_t power_eq_level(std::string_view w) {
  auto b = blocks(w);
  if (!b) return 0;
  std::uint64_t want = 7;
  for (auto k : *b) {
    if (k != want) return 0;
    want *= 8;
  }
  return b->size();
}

inline bool power_eq(std::string_view w) { return power_eq_level(w) > 0; }

// bits[i-1] is the membership bit of index i.
inline bool power_eq_L(std::string_view w, const std::vector<bool>& bits) {
  std::size_t k = power_eq_level(w);
  return k > 0 && k <= bits.size() && bits[k - 1];
}

// a^(8^k) with k >= 1 in L.
inline bool upower_L(std::string_view w, const std::vector<bool>& bits) {
  if (w.find_first_not_of('a') != std::string_view::npos) return false;
  std::uint64_t m = w.size(), k = 0;
  if (m < 8) return false;
  while (m % 8 == 0) {
    m /= 8;
    ++k;
  }
  return m == 1 && k <= bits.size() && bits[k - 1];
}

inline std::string member(std::size_t n) {
  std::string w = "ab";
  std::uint64_t len = 7;
  for (std::size_t i = 0; i <= n; ++i, len *= 8) {
    if (i) w += 'b';
    w.append(len, 'a');
  }
  return w;
}

// Strings over {0,1} in length-then-lexicographic order, starting with the
// empty string at index 1.
inline std::string binary_string(std::uint64_t i) {
  // Binary numeral of i with the leading 1 removed.
  std::string s;
  for (; i > 1; i /= 2) s.insert(s.begin(), static_cast<char>('0' + (i & 1)));
  return s;
}

inline std::uint64_t binary_index(std::string_view s) {
  std::uint64_t i = 1;
  for (char c : s) i = 2 * i + static_cast<std::uint64_t>(c - '0');
  return i;
}

// Probability of leaving a fair walk on 0..n+1 (started at 1) on the right,
// from the gambler's-ruin formula.
inline mpq_class ruin_right(long n) { return mpq_class(1, n + 1); }

}  // namespace ref
