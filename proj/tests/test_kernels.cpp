#include <doctest.h>

#include <cmath>
#include <random>

#include "dunklpot/kernels.hpp"

using namespace dunklpot;

namespace {

Point p1(double a) { return Point::Constant(1, a); }
Point p2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

const Field unitIndicator = indicatorField(p1(-1.0), p1(1.0));

}  // namespace

TEST_CASE("surface constants") {
  CHECK(surfaceConstant(DunklModel(RootSystem::rankOne(1.0))) == doctest::Approx(2.0).epsilon(1e-14));
  // int_0^{2 pi} |cos|^{2k} |sin|^{2k} = 2 Gamma(k+1/2)^2 / Gamma(2k+1).
  const double want = 2.0 * std::pow(std::tgamma(1.3), 2) / std::tgamma(2.6);
  CHECK(surfaceConstant(DunklModel(RootSystem::productZ2({0.8, 0.8}))) == doctest::Approx(want).epsilon(1e-10));
  CHECK(surfaceConstant(DunklModel(RootSystem::productZ2({0.0, 0.0}))) == doctest::Approx(2.0 * M_PI).epsilon(1e-12));
  // Roots scaled by c scale d_k by c^gamma.
  const RootSystem base = RootSystem::productZ2({0.8, 0.8});
  CHECK(surfaceConstant(DunklModel(base.scaled(2.0))) ==
        doctest::Approx(std::pow(2.0, 3.2) * surfaceConstant(DunklModel(base))).epsilon(1e-10));
  CHECK_THROWS_AS(surfaceConstant(DunklModel(RootSystem::productZ2({0.5, 0.5, 0.5, 0.5}))), UnsupportedError);
}

TEST_CASE("normalized Bessel function") {
  CHECK(besselJ(0.5, 0.0) == 1.0);
  // j_{1/2}(z) = sin z / z.
  for (double z : {0.3, 2.0, 11.0, 13.0, 40.0}) CHECK(besselJ(0.5, z) == doctest::Approx(std::sin(z) / z).epsilon(1e-12));
}

TEST_CASE("heat kernel") {
  const KernelContext r1(DunklModel(RootSystem::rankOne(1.0)));
  CHECK(heatKernel(r1, 0.5, p1(1.0), p1(0.3)) > 0.0);
  CHECK(heatKernel(r1, 0.5, p1(1.0), p1(0.3)) == doctest::Approx(heatKernel(r1, 0.5, p1(0.3), p1(1.0))));
  for (double t : {0.1, 1.0}) {
    for (double x : {0.0, 1.0, 2.0}) {
      CHECK(semigroupApply(r1, t, constantField(1, 1.0), p1(x)) == doctest::Approx(1.0).epsilon(1e-6));
    }
  }
  // k = 0 in d = 2: the Gaussian (4 pi t)^{-1} exp(-|x-y|^2 / 4t).
  const KernelContext flat(DunklModel(RootSystem::productZ2({0.0, 0.0})));
  for (double t : {0.2, 1.5}) {
    const Point x = p2(0.3, -1.0), y = p2(1.1, 0.4);
    const double gauss = std::exp(-(x - y).squaredNorm() / (4 * t)) / (4 * M_PI * t);
    CHECK(heatKernel(flat, t, x, y) == doctest::Approx(gauss).epsilon(1e-10));
  }
  CHECK_THROWS_AS(heatKernel(r1, 0.0, p1(1.0), p1(1.0)), InvalidArgument);
}

TEST_CASE("semigroup approximates the identity as t -> 0") {
  const KernelContext r1(DunklModel(RootSystem::rankOne(1.0)));
  const Field f = bumpField(p1(0.5), 1.0);
  double previous = INFINITY;
  for (double t : {0.1, 0.03, 0.01, 0.003}) {
    double err = 0.0;
    for (double x : {-0.4, 0.0, 0.3, 0.9, 1.3}) err = std::max(err, std::abs(semigroupApply(r1, t, f, p1(x)) - f(p1(x))));
    CHECK(err < previous);
    previous = err;
  }
}

TEST_CASE("green kernel") {
  const KernelContext r1(DunklModel(RootSystem::rankOne(1.0)));
  CHECK(greenFunction(r1, p1(1.0), p1(0.0)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(greenFunction(r1, p1(0.4), p1(1.3)) == doctest::Approx(greenFunction(r1, p1(1.3), p1(0.4))).epsilon(1e-10));
  const KernelContext z2(DunklModel(RootSystem::productZ2({0.8, 0.8})));
  const Point x = p2(0.6, -0.8);
  CHECK(greenFunction(z2, x, p2(0, 0)) == doctest::Approx(1.0 / (2 * z2.dk() * z2.lambda())).epsilon(1e-10));
  CHECK(greenFunction(z2, x, p2(0.3, 0.2)) <= greenBound(z2, x, p2(0.3, 0.2)));
  // Requires lambda > 0.
  CHECK_THROWS_AS(greenFunction(KernelContext(DunklModel(RootSystem::rankOne(0.0))), p1(1.0), p1(0.5)), InvalidArgument);
}

TEST_CASE("green potentials") {
  const KernelContext r1(DunklModel(RootSystem::rankOne(1.0)));
  CHECK(greenApply(r1, unitIndicator, p1(0.0)) == doctest::Approx(0.5).epsilon(1e-8));
  double previous = INFINITY;
  for (double x : {2.0, 5.0, 10.0, 20.0}) {
    const double g = greenApply(r1, unitIndicator, p1(x));
    CHECK(g >= 0.0);
    CHECK(g < previous);
    CHECK(g <= greenApplyBound(r1, unitIndicator, 1.0, p1(x)));
    previous = g;
  }
  CHECK_THROWS_AS(greenApply(r1, constantField(1, 1.0), p1(0.0)), InvalidArgument);
}

TEST_CASE("excessivity and decomposition") {
  const KernelContext r1(DunklModel(RootSystem::rankOne(1.0)));
  Field zero = constantField(1, 0.0);
  zero.support = {p1(-1.0), p1(1.0)};
  CHECK(excessivityCheck(r1, zero, {0.5}, {p1(0.3)}) == 0.0);
  double previous = greenApply(r1, unitIndicator, p1(0.5));
  for (double t : {0.1, 0.3, 1.0}) {
    const double v = semigroupOfPotential(r1, t, unitIndicator, p1(0.5));
    CHECK(v < previous);
    previous = v;
  }
  CHECK(std::abs(greenDecompositionResidual(r1, unitIndicator, 0.3, p1(1.5))) < 1e-6);
}

TEST_CASE("root rescaling leaves the analysis unchanged") {
  const RootSystem base = RootSystem::rankOne(1.0);
  const KernelContext a{DunklModel(base)};
  const KernelContext b{DunklModel(base.scaled(3.0))};
  CHECK(semigroupApply(a, 0.4, unitIndicator, p1(0.7)) ==
        doctest::Approx(semigroupApply(b, 0.4, unitIndicator, p1(0.7))).epsilon(1e-8));
  CHECK(greenApply(a, unitIndicator, p1(0.7)) == doctest::Approx(greenApply(b, unitIndicator, p1(0.7))).epsilon(1e-8));
}

TEST_CASE("tabulated green potential") {
  const KernelContext r1(DunklModel(RootSystem::rankOne(1.0)));
  const Field g = greenPotentialField(r1, unitIndicator, -3.0, 3.0, 601);
  for (double x : {-2.2, 0.33, 1.0, 4.0}) CHECK(g(p1(x)) == doctest::Approx(greenApply(r1, unitIndicator, p1(x))).epsilon(1e-4));
}
