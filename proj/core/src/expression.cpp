#include "qcfa/expression.hpp"

#include "qcfa/errors.hpp"

#include <cctype>

namespace qcfa {
namespace {

using Surd = ExpressionValue::Surd;

std::optional<Surd> normalize(Surd s) {
  if (s.coefficient == 0 || s.radicand == 0) return Surd{Rational(0), Rational(1)};
  return s;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  ExpressionValue parse() {
    ExpressionValue v = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character");
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what + " in expression '" + std::string(text_) + "'", 1, pos_ + 1);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExpressionValue expr() {
    ExpressionValue lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = add(lhs, term(), false);
      } else if (accept('-')) {
        lhs = add(lhs, term(), true);
      } else {
        return lhs;
      }
    }
  }

  ExpressionValue term() {
    ExpressionValue lhs = unary();
    for (;;) {
      if (accept('*')) {
        ExpressionValue rhs = unary();
        lhs.numeric *= rhs.numeric;
        if (lhs.exact && rhs.exact) {
          lhs.exact = normalize({lhs.exact->coefficient * rhs.exact->coefficient,
                                 lhs.exact->radicand * rhs.exact->radicand});
        } else {
          lhs.exact.reset();
        }
      } else if (accept('/')) {
        std::size_t at = pos_;
        ExpressionValue rhs = unary();
        if (rhs.numeric.is_zero()) {
          pos_ = at;
          fail("division by zero");
        }
        lhs.numeric /= rhs.numeric;
        if (lhs.exact && rhs.exact) {
          lhs.exact = normalize({lhs.exact->coefficient / rhs.exact->coefficient,
                                 lhs.exact->radicand / rhs.exact->radicand});
        } else {
          lhs.exact.reset();
        }
      } else {
        return lhs;
      }
    }
  }

  static ExpressionValue add(ExpressionValue lhs, const ExpressionValue& rhs, bool subtract) {
    if (subtract) {
      lhs.numeric -= rhs.numeric;
    } else {
      lhs.numeric += rhs.numeric;
    }
    if (lhs.exact && rhs.exact) {
      Rational rc = subtract ? Rational(-rhs.exact->coefficient) : rhs.exact->coefficient;
      if (rhs.exact->coefficient == 0) {
        // lhs unchanged
      } else if (lhs.exact->coefficient == 0) {
        lhs.exact = Surd{rc, rhs.exact->radicand};
      } else if (lhs.exact->radicand == rhs.exact->radicand) {
        lhs.exact = normalize({lhs.exact->coefficient + rc, lhs.exact->radicand});
      } else {
        lhs.exact.reset();
      }
    } else {
      lhs.exact.reset();
    }
    return lhs;
  }

  ExpressionValue unary() {
    if (accept('-')) {
      ExpressionValue v = unary();
      v.numeric = -v.numeric;
      if (v.exact) v.exact->coefficient = -v.exact->coefficient;
      return v;
    }
    if (accept('+')) return unary();
    return atom();
  }

  ExpressionValue atom() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end");
    if (accept('(')) {
      ExpressionValue v = expr();
      if (!accept(')')) fail("expected ')'");
      return v;
    }
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      std::string name(text_.substr(start, pos_ - start));
      if (name == "pi") return ExpressionValue{Scalar::pi(), std::nullopt};
      if (name != "sqrt" && name != "sin" && name != "cos") {
        pos_ = start;
        fail("unknown identifier '" + name + "'");
      }
      if (!accept('(')) fail("expected '(' after " + name);
      std::size_t arg_at = pos_;
      ExpressionValue arg = expr();
      if (!accept(')')) fail("expected ')'");
      if (name == "sin") return ExpressionValue{sin(arg.numeric), std::nullopt};
      if (name == "cos") return ExpressionValue{cos(arg.numeric), std::nullopt};
      if (arg.numeric.sign() < 0) {
        pos_ = arg_at;
        fail("square root of a negative value");
      }
      ExpressionValue out{sqrt(arg.numeric), std::nullopt};
      if (arg.exact && arg.exact->radicand == 1) out.exact = normalize({Rational(1), arg.exact->coefficient});
      return out;
    }
    fail("unexpected character");
  }

  ExpressionValue number() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.')) ++pos_;
    std::string mantissa(text_.substr(start, pos_ - start));
    long exponent = 0;
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t e_start = ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '-' || text_[pos_] == '+')) ++pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      try {
        exponent = std::stol(std::string(text_.substr(e_start, pos_ - e_start)));
      } catch (const std::exception&) {
        pos_ = e_start;
        fail("malformed exponent");
      }
    }
    Rational q;
    try {
      q = parse_rational(mantissa);
    } catch (const std::invalid_argument&) {
      pos_ = start;
      fail("malformed number");
    }
    if (exponent != 0) {
      Integer p;
      mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
      q = exponent > 0 ? Rational(q * p) : Rational(q / p);
    }
    return ExpressionValue{Scalar(q), normalize({q, Rational(1)})};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ExpressionValue evaluate_expression(std::string_view text) { return Parser(text).parse(); }

}  // namespace qcfa
