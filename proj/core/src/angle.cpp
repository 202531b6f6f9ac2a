#include "qcfa/angle.hpp"

namespace qcfa {
namespace {

Rational fractional_part(const Rational& q) {
  Integer floor_q;
  mpz_fdiv_q(floor_q.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return q - Rational(floor_q);
}

}  // namespace

bool SymbolicAngle::is_zero() const { return turns == 0 && sqrt2_halfturns == 0; }

bool SymbolicAngle::is_identity() const {
  return sqrt2_halfturns == 0 && fractional_part(turns) == 0;
}

SymbolicAngle& SymbolicAngle::operator+=(const SymbolicAngle& rhs) {
  turns += rhs.turns;
  sqrt2_halfturns += rhs.sqrt2_halfturns;
  return *this;
}

SymbolicAngle SymbolicAngle::operator-() const { return {Rational(-turns), Integer(-sqrt2_halfturns)}; }

SymbolicAngle operator*(const Integer& k, const SymbolicAngle& a) {
  return {Rational(Rational(k) * a.turns), Integer(k * a.sqrt2_halfturns)};
}

bool operator==(const SymbolicAngle& a, const SymbolicAngle& b) {
  return a.turns == b.turns && a.sqrt2_halfturns == b.sqrt2_halfturns;
}

Scalar SymbolicAngle::radians() const {
  const long prec = working_precision();
  Scalar halfturns;  // angle / pi, reduced to [0, 2)
  {
    // k*sqrt(2) loses log2|k| bits to the integer part; compensate before reducing.
    const long extra = 64 + static_cast<long>(mpz_sizeinbase(sqrt2_halfturns.get_mpz_t(), 2));
    PrecisionScope wide(prec + extra);
    Scalar k(sqrt2_halfturns);
    Scalar r = k * sqrt(Scalar(2L));
    r += Scalar(Rational(2 * fractional_part(turns)));
    r = fmod_positive(r, Scalar(2L));
    PrecisionScope narrow(prec);
    halfturns = Scalar(0L);
    halfturns += r;
  }
  Scalar out = halfturns * Scalar::pi();
  return out;
}

std::string SymbolicAngle::to_string() const {
  std::string out = "2pi*(" + turns.get_str() + ")";
  if (sqrt2_halfturns != 0) out += " + sqrt(2)pi*(" + sqrt2_halfturns.get_str() + ")";
  return out;
}

}  // namespace qcfa
