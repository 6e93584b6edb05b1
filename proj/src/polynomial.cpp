#include "dunklpot/polynomial.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

namespace dunklpot {

namespace {

class PolyParser {
 public:
  PolyParser(std::string_view text, int dim) : text_(text), dim_(dim) {}

  RationalPoly parse() {
    RationalPoly result(dim_);
    skipSpace();
    if (atEnd()) throw ParseError("empty polynomial", pos_);
    bool first = true;
    while (!atEnd()) {
      Rational sign = 1;
      if (peek() == '+' || peek() == '-') {
        if (peek() == '-') sign = -1;
        ++pos_;
        skipSpace();
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      auto [exponent, coeff] = parseTerm();
      result.addTerm(exponent, sign * coeff);
      first = false;
      skipSpace();
    }
    return result;
  }

 private:
  std::pair<Exponent, Rational> parseTerm() {
    Exponent e(static_cast<std::size_t>(dim_), 0);
    Rational coeff = 1;
    parseFactor(e, coeff);
    skipSpace();
    while (!atEnd() && peek() == '*') {
      ++pos_;
      skipSpace();
      parseFactor(e, coeff);
      skipSpace();
    }
    return {e, coeff};
  }

  void parseFactor(Exponent& e, Rational& coeff) {
    if (atEnd()) throw ParseError("expected a factor", pos_);
    const char c = peek();
    if (c == 'x' || c == 'X') {
      const std::size_t start = pos_;
      ++pos_;
      const int index = parseUnsigned("expected a variable index after 'x'");
      if (index < 1 || index > dim_) {
        throw ParseError("variable x" + std::to_string(index) + " outside dimension " + std::to_string(dim_), start);
      }
      int power = 1;
      skipSpace();
      if (!atEnd() && peek() == '^') {
        ++pos_;
        skipSpace();
        power = parseUnsigned("expected an integer exponent after '^'");
      }
      e[static_cast<std::size_t>(index - 1)] += power;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t start = pos_;
      while (!atEnd() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.')) ++pos_;
      if (!atEnd() && (peek() == 'e' || peek() == 'E')) {
        std::size_t probe = pos_ + 1;
        if (probe < text_.size() && (text_[probe] == '+' || text_[probe] == '-')) ++probe;
        if (probe < text_.size() && std::isdigit(static_cast<unsigned char>(text_[probe]))) {
          pos_ = probe;
          while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        }
      }
      if (!atEnd() && peek() == '/') {
        ++pos_;
        if (atEnd() || !std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected a denominator", pos_);
        while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      }
      try {
        coeff *= parseRational(text_.substr(start, pos_ - start));
      } catch (const ParseError& err) {
        throw ParseError("malformed number", start + err.offset());
      }
      return;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  int parseUnsigned(const char* message) {
    const std::size_t start = pos_;
    while (!atEnd() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) throw ParseError(message, start);
    int value = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, value);
    if (ec != std::errc()) throw ParseError("integer out of range", start);
    return value;
  }

  void skipSpace() {
    while (!atEnd() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }
  bool atEnd() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  std::string_view text_;
  int dim_;
  std::size_t pos_ = 0;
};

template <typename Scalar, typename CoeffFormatter>
std::string formatTerms(const MultiPoly<Scalar>& p, CoeffFormatter formatCoeff) {
  if (p.isZero()) return "0";
  std::vector<std::pair<Exponent, Scalar>> terms(p.terms().begin(), p.terms().end());
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    const int da = MultiPoly<Scalar>::totalDegree(a.first);
    const int db = MultiPoly<Scalar>::totalDegree(b.first);
    if (da != db) return da > db;
    return a.first > b.first;
  });
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms) {
    const bool negative = toDouble(c) < 0.0;
    const Scalar magnitude = negative ? Scalar(-c) : c;
    if (first) {
      if (negative) out << "-";
    } else {
      out << (negative ? " - " : " + ");
    }
    first = false;
    const bool isConstant = MultiPoly<Scalar>::totalDegree(e) == 0;
    bool wrote = false;
    if (isConstant || magnitude != Scalar(1)) {
      out << formatCoeff(magnitude);
      wrote = true;
    }
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (wrote) out << "*";
      out << "x" << (i + 1);
      if (e[i] > 1) out << "^" << e[i];
      wrote = true;
    }
  }
  return out.str();
}

std::string shortestDouble(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

RationalPoly parsePoly(std::string_view text, int dim) {
  if (dim < 1) throw InvalidArgument("parsePoly: dimension must be >= 1");
  return PolyParser(text, dim).parse();
}

std::string formatPoly(const RationalPoly& p) {
  return formatTerms(p, [](const Rational& c) { return formatRational(c); });
}

std::string formatPoly(const RealPoly& p) {
  return formatTerms(p, [](double c) { return shortestDouble(c); });
}

}  // namespace dunklpot
