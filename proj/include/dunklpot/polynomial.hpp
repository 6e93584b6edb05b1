#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dunklpot/errors.hpp"
#include "dunklpot/rational.hpp"

namespace dunklpot {

using Exponent = std::vector<int>;

/// Sparse multivariate polynomial: exponent multi-index -> coefficient.
/// Zero coefficients are never stored.
template <typename Scalar>
class MultiPoly {
 public:
  using Terms = std::map<Exponent, Scalar>;

  explicit MultiPoly(int dim = 1) : dim_(dim) {
    if (dim < 1) throw InvalidArgument("MultiPoly: dimension must be >= 1");
  }

  static MultiPoly constant(int dim, const Scalar& c) {
    MultiPoly p(dim);
    p.addTerm(Exponent(static_cast<std::size_t>(dim), 0), c);
    return p;
  }

  /// x_{axis+1}
  static MultiPoly variable(int dim, int axis) {
    Exponent e(static_cast<std::size_t>(dim), 0);
    e.at(static_cast<std::size_t>(axis)) = 1;
    MultiPoly p(dim);
    p.addTerm(e, Scalar(1));
    return p;
  }

  /// sum_i c_i x_i
  static MultiPoly linear(const std::vector<Scalar>& coeffs) {
    MultiPoly p(static_cast<int>(coeffs.size()));
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      Exponent e(coeffs.size(), 0);
      e[i] = 1;
      p.addTerm(e, coeffs[i]);
    }
    return p;
  }

  /// |x|^2
  static MultiPoly squaredNorm(int dim) {
    MultiPoly p(dim);
    for (int i = 0; i < dim; ++i) {
      Exponent e(static_cast<std::size_t>(dim), 0);
      e[static_cast<std::size_t>(i)] = 2;
      p.addTerm(e, Scalar(1));
    }
    return p;
  }

  int dim() const { return dim_; }
  const Terms& terms() const { return terms_; }
  bool isZero() const { return terms_.empty(); }
  std::size_t termCount() const { return terms_.size(); }

  /// Max total degree; -1 for the zero polynomial.
  int degree() const {
    int deg = -1;
    for (const auto& [e, c] : terms_) deg = std::max(deg, totalDegree(e));
    return deg;
  }

  static int totalDegree(const Exponent& e) {
    int s = 0;
    for (int v : e) s += v;
    return s;
  }

  Scalar coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Scalar(0) : it->second;
  }

  void addTerm(const Exponent& e, const Scalar& c) {
    if (static_cast<int>(e.size()) != dim_) throw InvalidArgument("MultiPoly: exponent length differs from dimension");
    if (c == Scalar(0)) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == Scalar(0)) terms_.erase(it);
    }
  }

  MultiPoly& operator+=(const MultiPoly& other) {
    checkDim(other);
    for (const auto& [e, c] : other.terms_) addTerm(e, c);
    return *this;
  }

  MultiPoly& operator-=(const MultiPoly& other) {
    checkDim(other);
    for (const auto& [e, c] : other.terms_) addTerm(e, -c);
    return *this;
  }

  MultiPoly& operator*=(const Scalar& s) {
    if (s == Scalar(0)) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend MultiPoly operator+(MultiPoly a, const MultiPoly& b) { return a += b; }
  friend MultiPoly operator-(MultiPoly a, const MultiPoly& b) { return a -= b; }
  friend MultiPoly operator*(MultiPoly a, const Scalar& s) { return a *= s; }
  friend MultiPoly operator*(const Scalar& s, MultiPoly a) { return a *= s; }
  friend MultiPoly operator-(MultiPoly a) { return a *= Scalar(-1); }

  friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    a.checkDim(b);
    MultiPoly out(a.dim_);
    Exponent e(static_cast<std::size_t>(a.dim_));
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.addTerm(e, ca * cb);
      }
    }
    return out;
  }

  friend bool operator==(const MultiPoly& a, const MultiPoly& b) { return a.dim_ == b.dim_ && a.terms_ == b.terms_; }

  /// Value at a double point.
  template <typename Derived>
  double evaluate(const Eigen::MatrixBase<Derived>& x) const {
    if (x.size() != dim_) throw InvalidArgument("MultiPoly::evaluate: point dimension mismatch");
    double sum = 0.0;
    for (const auto& [e, c] : terms_) {
      double term = toDouble(c);
      for (int i = 0; i < dim_; ++i) {
        for (int p = 0; p < e[static_cast<std::size_t>(i)]; ++p) term *= x(i);
      }
      sum += term;
    }
    return sum;
  }

  /// Value at a point given in the coefficient type (exact for Rational).
  Scalar evaluateExact(const std::vector<Scalar>& x) const {
    if (static_cast<int>(x.size()) != dim_) throw InvalidArgument("MultiPoly::evaluateExact: point dimension mismatch");
    Scalar sum(0);
    for (const auto& [e, c] : terms_) {
      Scalar term = c;
      for (int i = 0; i < dim_; ++i) {
        for (int p = 0; p < e[static_cast<std::size_t>(i)]; ++p) term *= x[static_cast<std::size_t>(i)];
      }
      sum += term;
    }
    return sum;
  }

  MultiPoly derivative(int axis) const {
    MultiPoly out(dim_);
    for (const auto& [e, c] : terms_) {
      const int p = e.at(static_cast<std::size_t>(axis));
      if (p == 0) continue;
      Exponent f = e;
      f[static_cast<std::size_t>(axis)] = p - 1;
      out.addTerm(f, c * Scalar(p));
    }
    return out;
  }

  /// Classical Laplacian.
  MultiPoly laplacian() const {
    MultiPoly out(dim_);
    for (int i = 0; i < dim_; ++i) out += derivative(i).derivative(i);
    return out;
  }

  /// q(x) = p(M x), M given row-major as M[i][j].
  MultiPoly composeLinear(const std::vector<std::vector<Scalar>>& m) const {
    if (static_cast<int>(m.size()) != dim_) throw InvalidArgument("MultiPoly::composeLinear: matrix size mismatch");
    std::vector<MultiPoly> rows;
    for (const auto& row : m) rows.push_back(MultiPoly::linear(row));
    // powers[i][p] = (row_i . x)^p, built lazily.
    std::vector<std::vector<MultiPoly>> powers(static_cast<std::size_t>(dim_));
    for (int i = 0; i < dim_; ++i) powers[static_cast<std::size_t>(i)].push_back(constant(dim_, Scalar(1)));
    auto power = [&](int i, int p) -> const MultiPoly& {
      auto& cache = powers[static_cast<std::size_t>(i)];
      while (static_cast<int>(cache.size()) <= p) cache.push_back(cache.back() * rows[static_cast<std::size_t>(i)]);
      return cache[static_cast<std::size_t>(p)];
    };
    MultiPoly out(dim_);
    for (const auto& [e, c] : terms_) {
      MultiPoly term = constant(dim_, c);
      for (int i = 0; i < dim_; ++i) {
        if (e[static_cast<std::size_t>(i)] > 0) term = term * power(i, e[static_cast<std::size_t>(i)]);
      }
      out += term;
    }
    return out;
  }

  /// Division by the linear form L(x) = sum_i a_i x_i: returns (q, r) with
  /// p = q L + r and r free of the pivot variable (largest |a_i|).
  std::pair<MultiPoly, MultiPoly> divideByLinear(const std::vector<Scalar>& a) const {
    if (static_cast<int>(a.size()) != dim_) throw InvalidArgument("divideByLinear: form size mismatch");
    int pivot = -1;
    double best = 0.0;
    for (int i = 0; i < dim_; ++i) {
      const double mag = std::abs(toDouble(a[static_cast<std::size_t>(i)]));
      if (mag > best) {
        best = mag;
        pivot = i;
      }
    }
    if (pivot < 0) throw InvalidArgument("divideByLinear: zero linear form");
    const auto pv = static_cast<std::size_t>(pivot);
    const Scalar lead = a[pv];

    MultiPoly work = *this;
    MultiPoly quotient(dim_);
    int top = 0;
    for (const auto& [e, c] : work.terms_) top = std::max(top, e[pv]);
    for (int level = top; level >= 1; --level) {
      std::vector<std::pair<Exponent, Scalar>> layer;
      for (const auto& [e, c] : work.terms_) {
        if (e[pv] == level) layer.emplace_back(e, c);
      }
      for (const auto& [e, c] : layer) {
        Exponent base = e;
        base[pv] -= 1;
        const Scalar q = c / lead;
        quotient.addTerm(base, q);
        for (int i = 0; i < dim_; ++i) {
          const Scalar ai = a[static_cast<std::size_t>(i)];
          if (ai == Scalar(0)) continue;
          Exponent f = base;
          f[static_cast<std::size_t>(i)] += 1;
          if (i == pivot) {
            work.terms_.erase(f);  // cancels exactly by construction
          } else {
            work.addTerm(f, -(q * ai));
          }
        }
      }
    }
    return {std::move(quotient), std::move(work)};
  }

  /// Drops coefficients with |c| <= tol.
  MultiPoly pruned(double tol) const {
    MultiPoly out(dim_);
    for (const auto& [e, c] : terms_) {
      if (std::abs(toDouble(c)) > tol) out.terms_.emplace(e, c);
    }
    return out;
  }

  double maxAbsCoefficient() const {
    double m = 0.0;
    for (const auto& [e, c] : terms_) m = std::max(m, std::abs(toDouble(c)));
    return m;
  }

  template <typename Other>
  MultiPoly<Other> cast() const {
    MultiPoly<Other> out(dim_);
    for (const auto& [e, c] : terms_) out.addTerm(e, convert<Other>(c));
    return out;
  }

 private:
  template <typename Other>
  static Other convert(const Scalar& c) {
    if constexpr (std::is_same_v<Other, double>) {
      return toDouble(c);
    } else if constexpr (std::is_same_v<Scalar, double>) {
      return rationalFromDouble(c);
    } else {
      return Other(c);
    }
  }

  void checkDim(const MultiPoly& other) const {
    if (other.dim_ != dim_) throw InvalidArgument("MultiPoly: dimension mismatch");
  }

  int dim_;
  Terms terms_;
};

using RationalPoly = MultiPoly<Rational>;
using RealPoly = MultiPoly<double>;

/// Grammar: signed terms `c * x1^a * x2^b` joined by `+` / `-`; coefficients
/// are integers, decimals (exact) or `p/q`. Variables are x1..x<dim>.
RationalPoly parsePoly(std::string_view text, int dim);

/// Canonical text: terms by descending total degree, coefficients as exact
/// rationals. parsePoly(formatPoly(p), p.dim()) == p.
std::string formatPoly(const RationalPoly& p);
std::string formatPoly(const RealPoly& p);

}  // namespace dunklpot
