#include "qcfa/numeric.hpp"

#include <cctype>
#include <climits>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qcfa {
namespace {

thread_local long tls_precision = kDefaultPrecisionBits;

constexpr mpfr_rnd_t kRound = MPFR_RNDN;

}  // namespace

long working_precision() { return tls_precision; }

PrecisionScope::PrecisionScope(long bits) : saved_(tls_precision) {
  if (bits < MPFR_PREC_MIN || bits > 1L << 20) {
    throw std::invalid_argument("precision out of range: " + std::to_string(bits));
  }
  tls_precision = bits;
}

PrecisionScope::~PrecisionScope() { tls_precision = saved_; }

Scalar::Scalar() {
  mpfr_init2(value_, tls_precision);
  mpfr_set_zero(value_, 1);
}

Scalar::Scalar(long value) {
  mpfr_init2(value_, tls_precision);
  mpfr_set_si(value_, value, kRound);
}

Scalar::Scalar(const Rational& value) {
  mpfr_init2(value_, tls_precision);
  mpfr_set_q(value_, value.get_mpq_t(), kRound);
}

Scalar::Scalar(const Integer& value) {
  mpfr_init2(value_, tls_precision);
  mpfr_set_z(value_, value.get_mpz_t(), kRound);
}

Scalar::Scalar(double value) {
  mpfr_init2(value_, tls_precision);
  mpfr_set_d(value_, value, kRound);
}

Scalar::Scalar(const Scalar& other) {
  mpfr_init2(value_, mpfr_get_prec(other.value_));
  mpfr_set(value_, other.value_, kRound);
}

Scalar::Scalar(Scalar&& other) noexcept {
  mpfr_init2(value_, MPFR_PREC_MIN);
  mpfr_swap(value_, other.value_);
}

Scalar& Scalar::operator=(const Scalar& other) {
  if (this != &other) {
    mpfr_set_prec(value_, mpfr_get_prec(other.value_));
    mpfr_set(value_, other.value_, kRound);
  }
  return *this;
}

Scalar& Scalar::operator=(Scalar&& other) noexcept {
  mpfr_swap(value_, other.value_);
  return *this;
}

Scalar::~Scalar() { mpfr_clear(value_); }

Scalar Scalar::parse(std::string_view text) {
  Scalar out;
  std::string buffer(text);
  char* end = nullptr;
  if (!buffer.empty()) mpfr_strtofr(out.value_, buffer.c_str(), &end, 10, kRound);
  if (buffer.empty() || end == nullptr || *end != '\0') {
    throw std::invalid_argument("not a decimal number: '" + buffer + "'");
  }
  return out;
}

Scalar Scalar::pi() {
  Scalar out;
  mpfr_const_pi(out.value_, kRound);
  return out;
}

Scalar Scalar::pow2(long exponent) {
  Scalar out(1L);
  mpfr_mul_2si(out.value_, out.value_, exponent, kRound);
  return out;
}

Scalar& Scalar::operator+=(const Scalar& rhs) {
  mpfr_add(value_, value_, rhs.value_, kRound);
  return *this;
}

Scalar& Scalar::operator-=(const Scalar& rhs) {
  mpfr_sub(value_, value_, rhs.value_, kRound);
  return *this;
}

Scalar& Scalar::operator*=(const Scalar& rhs) {
  mpfr_mul(value_, value_, rhs.value_, kRound);
  return *this;
}

Scalar& Scalar::operator/=(const Scalar& rhs) {
  if (mpfr_zero_p(rhs.value_)) throw std::domain_error("division by zero");
  mpfr_div(value_, value_, rhs.value_, kRound);
  return *this;
}

Scalar Scalar::operator-() const {
  Scalar out(*this);
  mpfr_neg(out.value_, out.value_, kRound);
  return out;
}

bool operator==(const Scalar& a, const Scalar& b) { return mpfr_equal_p(a.value_, b.value_) != 0; }

std::partial_ordering operator<=>(const Scalar& a, const Scalar& b) {
  if (mpfr_unordered_p(a.value_, b.value_)) return std::partial_ordering::unordered;
  int c = mpfr_cmp(a.value_, b.value_);
  if (c < 0) return std::partial_ordering::less;
  if (c > 0) return std::partial_ordering::greater;
  return std::partial_ordering::equivalent;
}

bool Scalar::is_zero() const { return mpfr_zero_p(value_) != 0; }
int Scalar::sign() const { return mpfr_sgn(value_); }
long Scalar::precision() const { return static_cast<long>(mpfr_get_prec(value_)); }
double Scalar::to_double() const { return mpfr_get_d(value_, kRound); }

long Scalar::exponent() const {
  if (mpfr_zero_p(value_)) return LONG_MIN;
  return static_cast<long>(mpfr_get_exp(value_));
}

std::string Scalar::to_string(std::size_t digits) const {
  if (mpfr_nan_p(value_)) return "nan";
  if (mpfr_inf_p(value_)) return mpfr_sgn(value_) < 0 ? "-inf" : "inf";
  if (digits == 0) {
    digits = static_cast<std::size_t>(mpfr_get_str_ndigits(10, mpfr_get_prec(value_)));
  }
  if (mpfr_zero_p(value_)) return "0";
  mpfr_exp_t exp10 = 0;
  char* raw = mpfr_get_str(nullptr, &exp10, 10, digits, value_, kRound);
  std::string mantissa(raw);
  mpfr_free_str(raw);
  bool negative = !mantissa.empty() && mantissa[0] == '-';
  if (negative) mantissa.erase(0, 1);
  while (mantissa.size() > 1 && mantissa.back() == '0') mantissa.pop_back();
  std::string out = negative ? "-" : "";
  // Plain positional notation for moderate exponents, scientific otherwise.
  if (exp10 > 0 && exp10 <= 40) {
    auto e = static_cast<std::size_t>(exp10);
    if (mantissa.size() <= e) {
      out += mantissa + std::string(e - mantissa.size(), '0');
    } else {
      out += mantissa.substr(0, e) + "." + mantissa.substr(e);
    }
  } else if (exp10 <= 0 && exp10 > -20) {
    out += "0." + std::string(static_cast<std::size_t>(-exp10), '0') + mantissa;
  } else {
    out += mantissa.substr(0, 1);
    if (mantissa.size() > 1) out += "." + mantissa.substr(1);
    out += "e" + std::to_string(exp10 - 1);
  }
  return out;
}

Scalar sqrt(const Scalar& x) {
  if (x.sign() < 0) throw std::domain_error("sqrt of negative value " + x.to_string(20));
  Scalar out;
  mpfr_sqrt(out.get(), x.get(), kRound);
  return out;
}

Scalar sin(const Scalar& x) {
  Scalar out;
  mpfr_sin(out.get(), x.get(), kRound);
  return out;
}

Scalar cos(const Scalar& x) {
  Scalar out;
  mpfr_cos(out.get(), x.get(), kRound);
  return out;
}

Scalar log(const Scalar& x) {
  Scalar out;
  mpfr_log(out.get(), x.get(), kRound);
  return out;
}

Scalar exp(const Scalar& x) {
  Scalar out;
  mpfr_exp(out.get(), x.get(), kRound);
  return out;
}

Scalar abs(const Scalar& x) {
  Scalar out;
  mpfr_abs(out.get(), x.get(), kRound);
  return out;
}

Scalar fmod_positive(const Scalar& x, const Scalar& m) {
  Scalar out;
  mpfr_fmod(out.get(), x.get(), m.get(), kRound);
  if (out.sign() < 0) out += m;
  return out;
}

Scalar square(const Scalar& x) { return x * x; }

Scalar precision_tolerance(long bits) { return Scalar::pow2(-(bits / 2)); }
Scalar precision_tolerance() { return precision_tolerance(working_precision()); }

std::ostream& operator<<(std::ostream& os, const Scalar& x) { return os << x.to_string(30); }

Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto strip = [](std::string& v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(0, 1);
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
  };
  strip(s);
  if (s.empty()) throw std::invalid_argument("empty rational");
  try {
    auto slash = s.find('/');
    if (slash != std::string::npos) {
      std::string num = s.substr(0, slash);
      std::string den = s.substr(slash + 1);
      strip(num);
      strip(den);
      Rational q{Integer(num, 10), Integer(den, 10)};
      if (q.get_den() == 0) throw std::invalid_argument("zero denominator");
      q.canonicalize();
      return q;
    }
    auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(Integer(s, 10));
    bool negative = s[0] == '-';
    std::string digits = s.substr(negative ? 1 : 0);
    dot = digits.find('.');
    std::string frac = digits.substr(dot + 1);
    std::string whole = digits.substr(0, dot) + frac;
    if (whole.empty()) throw std::invalid_argument("bad decimal");
    Integer den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    Rational q(Integer(whole, 10), den);
    q.canonicalize();
    return negative ? Rational(-q) : q;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("not a rational: '" + std::string(text) + "'");
  }
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace qcfa
