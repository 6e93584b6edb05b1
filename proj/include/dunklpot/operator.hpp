#pragma once

#include <functional>
#include <type_traits>

#include "dunklpot/intertwine.hpp"
#include "dunklpot/polynomial.hpp"
#include "dunklpot/reflection.hpp"

namespace dunklpot {

inline constexpr double kHyperplaneTheta = 1e-7;

namespace detail {

template <typename Scalar>
std::vector<Scalar> rootCoefficients(const RootSystem& roots, std::size_t r) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return roots.exactRoot(r);
  } else {
    const Point& a = roots.root(r);
    return std::vector<double>(a.data(), a.data() + a.size());
  }
}

template <typename Scalar>
Scalar rootMultiplicity(const RootSystem& roots, std::size_t r) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    return roots.exactMultiplicity(r);
  } else {
    return roots.multiplicity(r);
  }
}

template <typename Scalar>
void requireZeroRemainder(const MultiPoly<Scalar>& remainder, double scale) {
  if constexpr (std::is_same_v<Scalar, Rational>) {
    if (!remainder.isZero()) throw ConsistencyError("dunklLaplacianPoly: nonzero remainder in exact division");
  } else {
    if (remainder.maxAbsCoefficient() > 1e-9 * std::max(scale, 1.0)) {
      throw ConsistencyError("dunklLaplacianPoly: division remainder above tolerance");
    }
  }
}

}  // namespace detail

/// Delta_k p for any finite reflection group. Each root contributes
/// k * N / L^2 with L = <alpha, x> and N = <grad p, alpha> L - |alpha|^2/2 (p - p o sigma);
/// N is divided by L twice with zero remainder.
template <typename Scalar>
MultiPoly<Scalar> dunklLaplacianPoly(const DunklModel& model, const MultiPoly<Scalar>& p) {
  const int d = model.dim();
  if (p.dim() != d) throw InvalidArgument("dunklLaplacianPoly: polynomial dimension differs from model");
  MultiPoly<Scalar> result = p.laplacian();
  const auto& roots = model.roots();
  const double scale = p.maxAbsCoefficient();
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const Scalar k = detail::rootMultiplicity<Scalar>(roots, r);
    if (k == Scalar(0)) continue;
    const std::vector<Scalar> alpha = detail::rootCoefficients<Scalar>(roots, r);
    Scalar norm2(0);
    for (const auto& a : alpha) norm2 += a * a;
    std::vector<std::vector<Scalar>> sigma(static_cast<std::size_t>(d), std::vector<Scalar>(static_cast<std::size_t>(d)));
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) {
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        sigma[ui][uj] = (i == j ? Scalar(1) : Scalar(0)) - Scalar(2) * alpha[ui] * alpha[uj] / norm2;
      }
    }
    const MultiPoly<Scalar> linear = MultiPoly<Scalar>::linear(alpha);
    MultiPoly<Scalar> directional(d);
    for (int i = 0; i < d; ++i) directional += p.derivative(i) * alpha[static_cast<std::size_t>(i)];
    MultiPoly<Scalar> numerator = directional * linear;
    numerator -= (p - p.composeLinear(sigma)) * (norm2 / Scalar(2));
    auto [q1, r1] = numerator.divideByLinear(alpha);
    detail::requireZeroRemainder(r1, scale);
    auto [q2, r2] = q1.divideByLinear(alpha);
    detail::requireZeroRemainder(r2, scale);
    result += q2 * k;
  }
  if constexpr (std::is_same_v<Scalar, double>) return result.pruned(1e-13 * std::max(scale, 1.0));
  return result;
}

/// Value, gradient and Hessian of a C^2 function at one point.
struct Jet {
  double value = 0.0;
  Point gradient;
  Matrix hessian;
};

using JetFn = std::function<Jet(const Point&)>;

/// Delta_k f(x) from exact derivatives. When |<alpha,x>| < theta |alpha| max(|x|,1)
/// the pair term is replaced by its limit k alpha^T H alpha / |alpha|^2.
double dunklLaplacianJet(const DunklModel& model, const JetFn& f, const Point& x, double theta = kHyperplaneTheta);

/// Same with central differences of step h for the derivatives.
double dunklLaplacianFn(const DunklModel& model, const PointFn& f, const Point& x, double h,
                        double theta = kHyperplaneTheta);

Jet polyJet(const RealPoly& p, const Point& x);

/// Product over axes of exp(1 - 1/(1 - (x_i/a_i)^2)), zero outside the box.
Jet boxCutoffJet(const Point& halfWidths, const Point& x);

/// |int Delta_k f . phi~ w_k - int f . Delta_k phi~ w_k| with phi~ = phi * box cutoff,
/// by tensor Gauss-Legendre on panels graded toward the coordinate hyperplanes.
double checkSymmetry(const DunklModel& model, const RationalPoly& f, const RationalPoly& phi, const Point& halfWidths,
                     int quadOrder = 16);

}  // namespace dunklpot
