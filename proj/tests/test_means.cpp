#include <doctest.h>

#include <cmath>
#include <random>

#include "dunklpot/means.hpp"

using namespace dunklpot;

namespace {

Point p1(double a) { return Point::Constant(1, a); }
Point p2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

const KernelContext& rankOne() {
  static const KernelContext ctx(DunklModel(RootSystem::rankOne(1.0)));
  return ctx;
}

}  // namespace

TEST_CASE("mollifier") {
  const KernelContext& ctx = rankOne();
  const Mollifier m = Mollifier::make(ctx, 0.5, 0.05);
  CHECK(m.normalization(ctx) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(m(0.5) > 0.0);
  CHECK(m(0.56) == 0.0);
  CHECK(m(0.44) == 0.0);
  CHECK_THROWS_AS(Mollifier::make(ctx, 0.5, 0.5), InvalidArgument);
  CHECK_THROWS_AS(Mollifier::make(ctx, 0.5, 0.0), InvalidArgument);
}

TEST_CASE("means of simple functions") {
  const KernelContext& ctx = rankOne();
  auto one = [](const Point&) { return 1.0; };
  CHECK(sphericalMean(ctx, one, p1(2.0), 0.5, 0.02) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sphericalMean(ctx, one, p1(0.2), 0.5, 0.02) == doctest::Approx(1.0).epsilon(1e-6));
  // x is Delta_k-harmonic, so its mean is its centre value.
  CHECK(sphericalMean(ctx, [](const Point& y) { return y(0); }, p1(2.0), 0.5, 0.02) ==
        doctest::Approx(2.0).epsilon(1e-6));
  // For y^2 the mean exceeds the centre value: Delta_k y^2 = 6 > 0.
  CHECK(sphericalMean(ctx, [](const Point& y) { return y(0) * y(0); }, p1(2.0), 0.5, 0.02) > 4.0 + 1e-3);
  const KernelContext z2(DunklModel(RootSystem::productZ2({0.8, 0.8})));
  CHECK(sphericalMean(z2, one, p2(0.4, -0.3), 0.3, 0.01) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mollifier width converges") {
  const KernelContext& ctx = rankOne();
  auto g = [](const Point& y) { return std::cos(2.0 * y(0)) + y(0) * y(0) * y(0); };
  const double m08 = sphericalMean(ctx, g, p1(1.2), 0.6, 0.08);
  const double m04 = sphericalMean(ctx, g, p1(1.2), 0.6, 0.04);
  const double m02 = sphericalMean(ctx, g, p1(1.2), 0.6, 0.02);
  CHECK(std::abs(m08 - m04) >= 2.0 * std::abs(m04 - m02));
}

TEST_CASE("green mean oracle") {
  const KernelContext& ctx = rankOne();
  const Point y = p1(0.7);
  // Separated from the orbit: equality with G(x, y).
  CHECK(greenMeanOracle(ctx, p1(1.6), 0.5, y) == doctest::Approx(greenFunction(ctx, p1(1.6), y)).epsilon(1e-8));
  // Ball meets the orbit: strict inequality.
  CHECK(greenMeanOracle(ctx, p1(0.8), 0.5, y) < greenFunction(ctx, p1(0.8), y));
  CHECK(greenMeanOracle(ctx, p1(-0.6), 0.3, y) < greenFunction(ctx, p1(-0.6), y));
  // Small radius recovers G.
  CHECK(greenMeanOracle(ctx, p1(0.72), 1e-4, y) == doctest::Approx(greenFunction(ctx, p1(0.72), y)).epsilon(1e-3));
  auto g = [&](const Point& z) { return greenFunction(ctx, z, y); };
  CHECK(sphericalMean(ctx, g, p1(1.6), 0.5, 0.01) == doctest::Approx(greenMeanOracle(ctx, p1(1.6), 0.5, y)).epsilon(1e-3));
  CHECK(sphericalMean(ctx, g, p1(0.8), 0.5, 0.01) == doctest::Approx(greenMeanOracle(ctx, p1(0.8), 0.5, y)).epsilon(1e-3));
}

TEST_CASE("kernel mean identity") {
  const KernelContext& ctx = rankOne();
  const KernelMeanResult at0 = kernelMeanCheck(ctx, p1(0.8), 0.4, p1(0.0));
  CHECK(std::abs(at0.lhs - 1.0) < 1e-12);
  CHECK(at0.residual < 1e-6);
  CHECK(kernelMeanCheck(ctx, p1(0.0), 0.5, p1(2.0)).residual < 5e-3);
  CHECK(kernelMeanCheck(ctx, p1(1.0), 0.5, p1(-1.5)).residual < 5e-3);
}

TEST_CASE("harmonicity test") {
  const KernelContext& ctx = rankOne();
  const Domain v = Domain::parse("interval:-3,3", 1);
  const std::vector<HarmonicitySample> samples{{p1(0.5), 0.5}, {p1(-1.2), 0.8}, {p1(2.0), 0.6}};
  const HarmonicityReport lin = harmonicityTest(ctx, [](const Point& y) { return y(0); }, v, samples);
  CHECK(lin.consistent);
  CHECK(lin.maxDeviation < 5e-3);
  const HarmonicityReport sq = harmonicityTest(ctx, [](const Point& y) { return y(0) * y(0); }, v, samples);
  CHECK_FALSE(sq.consistent);
  // Mean of y^2 over a ball of radius t exceeds the centre by a multiple of t^2.
  CHECK(sq.maxDeviation > 0.1);
  const HarmonicityReport c = harmonicityTest(ctx, [](const Point&) { return 3.0; }, v, samples);
  CHECK(c.maxDeviation < 1e-6);
  CHECK_THROWS_AS(harmonicityTest(ctx, [](const Point&) { return 1.0; }, Domain::parse("interval:0,3", 1), samples),
                  InvalidArgument);
  CHECK_THROWS_AS(harmonicityTest(ctx, [](const Point&) { return 1.0; }, v, {{p1(2.5), 1.0}}), InvalidArgument);
}

TEST_CASE("super-mean value property of green potentials") {
  const KernelContext& ctx = rankOne();
  const Field phi = indicatorField(p1(-1.0), p1(1.0));
  const Field g = greenPotentialField(ctx, phi, -3.0, 3.0, 601);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ux(-1.5, 1.5), ur(0.1, 0.8);
  for (int it = 0; it < 6; ++it) {
    const double x = ux(rng), r = ur(rng);
    CHECK(sphericalMean(ctx, g.eval, p1(x), r, r / 50.0) <= g(p1(x)) + kMeansTol);
  }
  // Charge outside V: G f is harmonic on V, so its means equal the centre value.
  const Field outside = indicatorField(p1(2.5), p1(3.0));
  const Field h = greenPotentialField(ctx, outside, -4.0, 4.0, 801);
  for (auto [x, r] : {std::pair{0.5, 0.5}, std::pair{-1.0, 0.6}}) {
    CHECK(sphericalMean(ctx, h.eval, p1(x), r, r / 50.0) == doctest::Approx(h(p1(x))).epsilon(kMeansTol));
  }
}

TEST_CASE("minimum principle harness") {
  const KernelContext& ctx = rankOne();
  const Domain omega = Domain::parse("interval:-2,2", 1);
  std::vector<Point> grid;
  for (int i = 1; i < 8; ++i) grid.push_back(p1(-2.0 + 0.5 * i));
  const MinimumPrincipleReport zero = minimumPrincipleCheck(ctx, [](const Point&) { return 0.0; }, omega, grid, 1e-9);
  CHECK(zero.conclusionAsserted);
  CHECK(zero.conclusionHolds);
  const MinimumPrincipleReport neg = minimumPrincipleCheck(ctx, [](const Point&) { return -1.0; }, omega, grid, 1e-9);
  CHECK_FALSE(neg.boundaryOk);
  CHECK_FALSE(neg.conclusionAsserted);
  // 5 - y^2: Delta_k = -6, boundary value 1.
  const MinimumPrincipleReport sub =
      minimumPrincipleCheck(ctx, [](const Point& y) { return 5.0 - y(0) * y(0); }, omega, grid, 1e-9);
  CHECK(sub.boundaryOk);
  CHECK(sub.superMeanOk);
  CHECK(sub.conclusionHolds);
}
