#include "dunklpot/rational.hpp"

#include <cctype>
#include <cmath>
#include <string>

#include "dunklpot/errors.hpp"

namespace dunklpot {

namespace {

mpz_class pow10(long exponent) {
  mpz_class result;
  mpz_ui_pow_ui(result.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
  return result;
}

}  // namespace

Rational parseRational(std::string_view text) {
  std::size_t pos = 0;
  auto fail = [&](const char* what) -> Rational { throw ParseError(what, pos); };

  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  bool negative = false;
  if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
    negative = text[pos] == '-';
    ++pos;
  }

  std::string digits;
  long scale = 0;
  bool sawDigit = false;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
    digits.push_back(text[pos++]);
    sawDigit = true;
  }
  if (pos < text.size() && text[pos] == '.') {
    ++pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      digits.push_back(text[pos++]);
      ++scale;
      sawDigit = true;
    }
  }
  if (!sawDigit) return fail("expected a number");

  long exponent = 0;
  if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
    ++pos;
    bool expNegative = false;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
      expNegative = text[pos] == '-';
      ++pos;
    }
    if (pos >= text.size() || !std::isdigit(static_cast<unsigned char>(text[pos]))) {
      return fail("malformed exponent");
    }
    std::string expDigits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) expDigits.push_back(text[pos++]);
    if (expDigits.size() > 6) return fail("exponent out of range");
    exponent = std::stol(expDigits);
    if (expNegative) exponent = -exponent;
  }

  mpz_class numerator(digits, 10);
  mpz_class denominator = 1;
  exponent -= scale;
  if (exponent >= 0) {
    numerator *= pow10(exponent);
  } else {
    denominator = pow10(-exponent);
  }

  if (pos < text.size() && text[pos] == '/') {
    if (scale != 0) return fail("rational denominator after a decimal point");
    ++pos;
    std::string denDigits;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) denDigits.push_back(text[pos++]);
    if (denDigits.empty()) return fail("expected a denominator");
    denominator *= mpz_class(denDigits, 10);
    if (denominator == 0) return fail("zero denominator");
  }
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos != text.size()) return fail("trailing characters after number");

  Rational value(numerator, denominator);
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

Rational rationalFromDouble(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("rationalFromDouble: non-finite value");
  return Rational(value);
}

std::string formatRational(const Rational& value) { return value.get_str(10); }

}  // namespace dunklpot
