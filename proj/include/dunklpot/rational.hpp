#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace dunklpot {

using Rational = mpq_class;

/// Parses "3", "-2/7", "0.8", "1.5e-3" exactly. Throws ParseError on malformed text.
Rational parseRational(std::string_view text);

/// Exact binary value of a finite double.
Rational rationalFromDouble(double value);

std::string formatRational(const Rational& value);

/// Scalar conversions used by the templates that run over both Rational and double.
template <typename Scalar>
Scalar scalarFromRational(const Rational& value);

template <>
inline Rational scalarFromRational<Rational>(const Rational& value) {
  return value;
}

template <>
inline double scalarFromRational<double>(const Rational& value) {
  return value.get_d();
}

inline double toDouble(const Rational& value) { return value.get_d(); }
inline double toDouble(double value) { return value; }

}  // namespace dunklpot
