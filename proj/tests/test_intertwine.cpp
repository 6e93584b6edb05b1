#include <doctest.h>

#include <cmath>
#include <random>

#include "dunklpot/intertwine.hpp"
#include "dunklpot/operator.hpp"

using namespace dunklpot;

namespace {

Point p1(double a) { return Point::Constant(1, a); }
Point p2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

// Random polynomial with small integer coefficients and total degree <= deg.
RationalPoly randomPoly(std::mt19937_64& rng, int dim, int deg, int terms) {
  std::uniform_int_distribution<int> c(-5, 5), e(0, deg);
  RationalPoly p(dim);
  for (int t = 0; t < terms; ++t) {
    Exponent ex(static_cast<std::size_t>(dim), 0);
    int left = e(rng);
    for (int i = 0; i < dim && left > 0; ++i) {
      const int take = i == dim - 1 ? left : std::uniform_int_distribution<int>(0, left)(rng);
      ex[static_cast<std::size_t>(i)] = take;
      left -= take;
    }
    Rational coeff(c(rng), 1 + std::abs(c(rng)));
    coeff.canonicalize();
    p.addTerm(ex, coeff);
  }
  return p;
}

// Rank-one Dunkl kernel for k = 1 via half-integer Bessel functions:
// E(x, y) = sinh z / z + (z cosh z - sinh z) / z^2, z = xy.
double rankOneKernelK1(double z) {
  if (std::abs(z) < 1e-3) return 1.0 + z / 3.0 + z * z / 6.0;
  return std::sinh(z) / z + (z * std::cosh(z) - std::sinh(z)) / (z * z);
}

}  // namespace

TEST_CASE("mu at the origin is a point mass") {
  const DunklModel z2(RootSystem::productZ2({0.8, 0.8}));
  const MuQuadrature q = muQuadrature(z2, p2(0, 0));
  REQUIRE(q.nodes.size() == 1);
  CHECK(q.nodes[0].norm() == 0.0);
  CHECK(q.weights[0] == doctest::Approx(1.0));
}

TEST_CASE("mu nodes stay in the orbit hull") {
  const DunklModel z2(RootSystem::productZ2({0.8, 0.3}));
  const Point x = p2(1.3, -0.7);
  const MuQuadrature q = muQuadrature(z2, x);
  double total = 0.0;
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    CHECK(std::abs(q.nodes[i](0)) <= 1.3);
    CHECK(std::abs(q.nodes[i](1)) <= 0.7);
    CHECK(q.weights[i] >= 0.0);
    total += q.weights[i];
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("moments of the rank-one factor") {
  // E[t] = 1/(2k+1) for the density prop. to (1-t)^(k-1) (1+t)^k.
  CHECK(exactMoment(Rational(1), 1) == Rational(1, 3));
  CHECK(exactMoment(Rational(1, 2), 1) == Rational(1, 2));
  CHECK(exactMoment(Rational(4, 5), 0) == Rational(1));
  const AxisRule r = axisRule(0.8, 40);
  for (int n = 0; n <= 12; ++n) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.t.size(); ++i) s += r.w[i] * std::pow(r.t[i], n);
    CHECK(s == doctest::Approx(exactMoment(Rational(4, 5), n).get_d()).epsilon(1e-13));
  }
}

TEST_CASE("applyVk is exact on polynomials up to the quadrature degree") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const DunklModel z2(RootSystem::productZ2({0.8, 0.3}));
  const int order = 6;
  for (int it = 0; it < 20; ++it) {
    const RationalPoly p = randomPoly(rng, 2, 2 * order - 1, 6);
    const RealPoly exact = applyVkExact(z2, p).cast<double>();
    const Point x = p2(u(rng), u(rng));
    const double want = exact.evaluate(x);
    CHECK(std::abs(applyVk(z2, p.cast<double>(), x, order) - want) <= 1e-10 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("vkMatrix is diagonal for product groups") {
  const DunklModel z2(RootSystem::productZ2({0.8, 0.8}));
  const VkMatrix m = vkMatrix(z2, 3);
  for (std::size_t r = 0; r < m.basis.size(); ++r) {
    for (std::size_t c = 0; c < m.basis.size(); ++c) {
      if (r != c) CHECK(m.entries[r][c] == 0);
    }
  }
  // V_k x = x / (2k+1) in rank one.
  const DunklModel r1(RootSystem::rankOne(1.0));
  CHECK(vkMatrix(r1, 1).entries[0][0] == Rational(1, 3));
}

TEST_CASE("intertwining identity Delta_k V_k = V_k Delta") {
  std::mt19937_64 rng(4);
  for (const DunklModel& m : {DunklModel(RootSystem::rankOne(1.0)), DunklModel(RootSystem::productZ2({0.8, 0.3}))}) {
    for (int it = 0; it < 10; ++it) {
      const RationalPoly p = randomPoly(rng, m.dim(), 6, 5);
      const RationalPoly lhs = dunklLaplacianPoly(m, applyVkExact(m, p));
      const RationalPoly rhs = applyVkExact(m, p.laplacian());
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("rank-one Dunkl kernel against the Bessel closed form") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  for (double x : {-1.5, -0.3, 0.0, 0.8, 2.0}) {
    for (double y : {-1.0, 0.5, 1.7}) {
      const double want = rankOneKernelK1(x * y);
      CHECK(dunklKernel(r1, p1(x), p1(y)) == doctest::Approx(want).epsilon(1e-12));
    }
  }
  // E(ix, y) = cos-type part + i sin-type part; |E(ix, y)| <= 1.
  const auto e = dunklKernelImag(r1, p1(1.3), p1(2.1));
  CHECK(std::abs(e) <= 1.0 + 1e-12);
  // Symmetry E(x, y) = E(y, x).
  CHECK(dunklKernel(r1, p1(0.7), p1(1.9)) == doctest::Approx(dunklKernel(r1, p1(1.9), p1(0.7))).epsilon(1e-12));
}

TEST_CASE("radial translation") {
  const DunklModel z2(RootSystem::productZ2({0.8, 0.8}));
  auto f = [](double s) { return std::exp(-s * s); };
  const Point y = p2(0.4, -1.1);
  CHECK(radialTranslate(z2, f, p2(0, 0), y) == doctest::Approx(f(y.norm())).epsilon(1e-14));
  CHECK(radialTranslate(z2, [](double) { return 1.0; }, p2(1.0, 2.0), y) == doctest::Approx(1.0).epsilon(1e-13));
}
