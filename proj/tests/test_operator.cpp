#include <doctest.h>

#include <cmath>
#include <random>

#include "dunklpot/operator.hpp"

using namespace dunklpot;

namespace {

Point p1(double a) { return Point::Constant(1, a); }
Point p2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

// p o g for a rational matrix g, applied to the variables.
RationalPoly compose(const RationalPoly& p, const std::vector<std::vector<Rational>>& g) {
  return p.composeLinear(g);
}

}  // namespace

TEST_CASE("polynomial parsing") {
  const RationalPoly a = parsePoly("x1", 1);
  CHECK(a.termCount() == 1);
  CHECK(a.coefficient({1}) == 1);
  CHECK(parsePoly("3*x1^2*x2 - x2^3", 2).termCount() == 2);
  const RationalPoly merged = parsePoly("x1 + x1", 1);
  CHECK(merged.termCount() == 1);
  CHECK(merged.coefficient({1}) == 2);
  CHECK(parsePoly("1/2*x1^2 - 0.25", 1).coefficient({0}) == Rational(-1, 4));
  CHECK_THROWS_AS(parsePoly("x3", 2), ParseError);
  CHECK_THROWS_AS(parsePoly("x1^", 1), ParseError);
  const RationalPoly q = parsePoly("3*x1^2*x2 - x2^3 + 7/3", 2);
  CHECK(parsePoly(formatPoly(q), 2) == q);
}

TEST_CASE("symbolic Dunkl Laplacian examples") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  CHECK(dunklLaplacianPoly(r1, parsePoly("x1", 1)).isZero());
  CHECK(dunklLaplacianPoly(r1, parsePoly("x1^2", 1)) == RationalPoly::constant(1, Rational(6)));
  // k = 1/2: 2 + 4k = 4.
  const DunklModel half(RootSystem::rankOne(0.5));
  CHECK(formatPoly(dunklLaplacianPoly(half, parsePoly("x1^2", 1))) == "4");
  // Delta_k x^3 = 6x + 2k (3x^2 / x) - k (2x^3)/x^2 = (6 + 4k) x in rank one.
  CHECK(dunklLaplacianPoly(r1, parsePoly("x1^3", 1)) == parsePoly("10*x1", 1));
  const DunklModel z2(parseModelConfig("dim = 2\nroots = 1,0; -1,0; 0,1; 0,-1\nk = 4/5\n"));
  CHECK(dunklLaplacianPoly(z2, parsePoly("x1^2 - x2^2", 2)).isZero());
  CHECK(dunklLaplacianPoly(z2, parsePoly("x1*x2", 2)).isZero());
  CHECK(dunklLaplacianPoly(z2, RationalPoly::squaredNorm(2)) ==
        RationalPoly::constant(2, Rational(4) + 2 * z2.exactGamma()));
}

TEST_CASE("equivariance under the group") {
  std::mt19937_64 rng(9);
  const DunklModel z2(parseModelConfig("dim = 2\nroots = 1,0; -1,0; 0,1; 0,-1\nk = 4/5, 4/5, 1/3, 1/3\n"));
  const RationalPoly p = parsePoly("x1^4*x2 - 3*x1*x2^2 + 2*x2^3 - x1 + 5", 2);
  const RationalPoly lp = dunklLaplacianPoly(z2, p);
  for (int s1 : {-1, 1}) {
    for (int s2 : {-1, 1}) {
      const std::vector<std::vector<Rational>> g{{Rational(s1), Rational(0)}, {Rational(0), Rational(s2)}};
      CHECK(dunklLaplacianPoly(z2, compose(p, g)) == compose(lp, g));
    }
  }
  // Dihedral: compare numerically at random points.
  const DunklModel dih(RootSystem::dihedral(3, 0.5));
  const RealPoly q = p.cast<double>();
  const RealPoly lq = dunklLaplacianPoly(dih, q);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (const Matrix& g : dih.group()) {
    std::vector<std::vector<double>> gm{{g(0, 0), g(0, 1)}, {g(1, 0), g(1, 1)}};
    const RealPoly lhs = dunklLaplacianPoly(dih, q.composeLinear(gm));
    for (int it = 0; it < 5; ++it) {
      const Point x = p2(u(rng), u(rng));
      CHECK(lhs.evaluate(x) == doctest::Approx(lq.evaluate(Point(g * x))).epsilon(1e-9));
    }
  }
}

TEST_CASE("invariance under rescaling the roots") {
  const RootSystem base({p2(1, 0), p2(-1, 0), p2(0, 1), p2(0, -1)}, {0.8, 0.8, 0.3, 0.3});
  const DunklModel a(base);
  const DunklModel b(base.scaled(2.0));
  const RationalPoly p = parsePoly("x1^3*x2^2 - x1*x2 + 4*x2^5", 2);
  CHECK(dunklLaplacianPoly(a, p) == dunklLaplacianPoly(b, p));
}

TEST_CASE("jet and finite-difference evaluation") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  const RealPoly x = parsePoly("x1", 1).cast<double>();
  auto fx = [&](const Point& p) { return x.evaluate(p); };
  auto jx = [&](const Point& p) { return polyJet(x, p); };
  for (double at : {0.7, -1.2, 1e-9, 0.0}) {
    CHECK(std::abs(dunklLaplacianFn(r1, fx, p1(at), 1e-4)) < 1e-7);
    CHECK(std::abs(dunklLaplacianJet(r1, jx, p1(at))) < 1e-7);
  }
  // x^2 on the hyperplane uses the limit formula: 2 + 4k = 6.
  const RealPoly sq = parsePoly("x1^2", 1).cast<double>();
  CHECK(dunklLaplacianJet(r1, [&](const Point& p) { return polyJet(sq, p); }, p1(0.0)) == doctest::Approx(6.0));
}

TEST_CASE("finite differences converge at second order") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  const RationalPoly p = parsePoly("x1^8 - x1^5 + x1", 1);
  const RealPoly pr = p.cast<double>();
  const RealPoly exact = dunklLaplacianPoly(r1, p).cast<double>();
  auto f = [&](const Point& x) { return pr.evaluate(x); };
  for (double at : {0.7, 0.9, 1.1, -1.3}) {
    const double e1 = std::abs(dunklLaplacianFn(r1, f, p1(at), 1e-3) - exact.evaluate(p1(at)));
    const double e2 = std::abs(dunklLaplacianFn(r1, f, p1(at), 1e-4) - exact.evaluate(p1(at)));
    CAPTURE(at);
    CHECK(std::log10(e1 / e2) >= 1.9);
  }
  // 50 random points, d = 2, h = 1e-4.
  const DunklModel z2(RootSystem::productZ2({0.8, 0.3}));
  const RationalPoly q = parsePoly("x1^4 - 2*x1^3*x2 + 3*x1*x2^2 + x2", 2);
  const RealPoly qr = q.cast<double>();
  const RealPoly lq = dunklLaplacianPoly(z2, q).cast<double>();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int it = 0; it < 50; ++it) {
    const Point x = p2(u(rng), u(rng));
    const double want = lq.evaluate(x);
    CHECK(std::abs(dunklLaplacianFn(z2, [&](const Point& z) { return qr.evaluate(z); }, x, 1e-4) - want) <=
          1e-5 * std::max(1.0, std::abs(want)));
  }
}

TEST_CASE("symmetry of Delta_k against w_k") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  const Point box1 = Point::Constant(1, 1.5);
  CHECK(checkSymmetry(r1, parsePoly("1", 1), parsePoly("x1^2 + x1", 1), box1) < 1e-8);
  const double res = checkSymmetry(r1, parsePoly("x1^3 - x1", 1), parsePoly("x1^2 + 2*x1 + 1", 1), box1);
  CHECK(res < 1e-8);
  const RootSystem base({p2(1, 0), p2(-1, 0), p2(0, 1), p2(0, -1)}, {0.8, 0.8, 0.8, 0.8});
  const Point box2 = Point::Constant(2, 1.2);
  const RationalPoly f = parsePoly("x1^2*x2 - x2^3 + x1", 2);
  const RationalPoly phi = parsePoly("x1*x2 + x1^2 + 1", 2);
  const double r = checkSymmetry(DunklModel(base), f, phi, box2);
  const double r2 = checkSymmetry(DunklModel(base.scaled(2.0)), f, phi, box2);
  CHECK(r < 1e-8);
  CHECK(r2 < 1e-8);
}
