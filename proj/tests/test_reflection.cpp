#include <doctest.h>

#include <cmath>
#include <random>

#include "dunklpot/domain.hpp"
#include "dunklpot/reflection.hpp"

using namespace dunklpot;

namespace {

Point p1(double a) { return Point::Constant(1, a); }
Point p2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

bool containsPoint(const std::vector<Point>& pts, const Point& q) {
  for (const auto& p : pts) {
    if ((p - q).norm() < 1e-12) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("reflect examples") {
  CHECK(reflect(p1(1.0), p1(3.0))(0) == doctest::Approx(-3.0));
  const Point a = reflect(p2(1, 0), p2(1, 2));
  CHECK(a(0) == doctest::Approx(-1.0));
  CHECK(a(1) == doctest::Approx(2.0));
  const Point b = reflect(p2(1, 1), p2(1, 0));
  CHECK(b(0) == doctest::Approx(0.0));
  CHECK(b(1) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(reflect(p2(0, 0), p2(1, 0)), InvalidArgument);
}

TEST_CASE("reflections are isometric involutions") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> n;
  for (int it = 0; it < 200; ++it) {
    Point alpha(3), x(3), y(3);
    for (int i = 0; i < 3; ++i) {
      alpha(i) = n(rng);
      x(i) = n(rng);
      y(i) = n(rng);
    }
    CHECK((reflect(alpha, reflect(alpha, x)) - x).norm() < 1e-12);
    CHECK(std::abs((reflect(alpha, x) - reflect(alpha, y)).norm() - (x - y).norm()) < 1e-12);
    CHECK((reflectionMatrix(alpha) * x - reflect(alpha, x)).norm() < 1e-12);
  }
}

TEST_CASE("group orders") {
  CHECK(DunklModel(RootSystem::rankOne(1.0)).group().size() == 2);
  for (int d = 1; d <= 4; ++d) {
    const DunklModel m(RootSystem::productZ2(std::vector<double>(static_cast<std::size_t>(d), 0.5)));
    CHECK(m.group().size() == (std::size_t{1} << d));
    CHECK(m.isProductZ2());
  }
  // Z2^2: exactly the four diagonal sign matrices.
  const DunklModel z2(RootSystem::productZ2({0.8, 0.8}));
  for (const Matrix& g : z2.group()) {
    CHECK(std::abs(g(0, 1)) < 1e-15);
    CHECK(std::abs(std::abs(g(0, 0)) - 1.0) < 1e-15);
  }
  // 2m roots at angles j pi / m give the dihedral group of order 2m.
  CHECK(DunklModel(RootSystem::dihedral(3, 0.5)).group().size() == 6);
  CHECK(DunklModel(RootSystem::dihedral(6, 0.5)).group().size() == 12);
  CHECK_FALSE(DunklModel(RootSystem::dihedral(3, 0.5)).isProductZ2());
  CHECK_THROWS_AS(DunklModel(RootSystem::dihedral(6, 0.5), 8), NonTerminationError);
}

TEST_CASE("root system validation") {
  CHECK_THROWS_AS(RootSystem({p1(1.0)}, {1.0}), InvalidArgument);                     // not closed under negation
  CHECK_THROWS_AS(DunklModel(RootSystem({p1(1.0), p1(-1.0)}, {1.0, 0.5})), InvalidArgument);  // k not constant on orbits
  CHECK_THROWS_AS(RootSystem({p1(1.0), p1(-1.0)}, {-1.0, -1.0}), InvalidArgument);    // negative k
  CHECK_THROWS_AS(RootSystem({p1(0.0), p1(-0.0)}, {1.0, 1.0}), InvalidArgument);      // zero root
}

TEST_CASE("derived constants") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  CHECK(r1.gamma() == doctest::Approx(2.0));
  CHECK(r1.lambda() == doctest::Approx(0.5));
  const DunklModel z2(RootSystem::productZ2({0.8, 0.8}));
  CHECK(z2.lambda() == doctest::Approx(1.6));
  CHECK(z2.axisMultiplicity(1) == doctest::Approx(0.8));
  CHECK_THROWS_AS(DunklModel(RootSystem::dihedral(3, 0.5)).requireProductZ2("x"), UnsupportedError);
  CHECK_THROWS_AS(DunklModel(RootSystem::rankOne(0.0)).requirePositiveLambda("x"), InvalidArgument);
}

TEST_CASE("weight") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  CHECK(weight(r1, p1(2.0)) == doctest::Approx(4.0));
  CHECK(weight(r1, p1(0.0)) == 0.0);
  const DunklModel dih(RootSystem::dihedral(3, 0.5));
  const Point onLine = p2(std::cos(M_PI / 3 + M_PI / 2), std::sin(M_PI / 3 + M_PI / 2));
  CHECK(weight(dih, onLine) < 1e-7);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (const DunklModel& m : {DunklModel(RootSystem::productZ2({0.8, 0.3})), dih}) {
    for (int it = 0; it < 50; ++it) {
      const Point x = p2(u(rng), u(rng));
      const double w0 = weight(m, x);
      for (const Matrix& g : m.group()) CHECK(std::abs(weight(m, Point(g * x)) - w0) <= 1e-12 * w0);
    }
  }
}

TEST_CASE("orbits") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  const auto o1 = orbit(r1, p1(1.5));
  CHECK(o1.size() == 2);
  CHECK(containsPoint(o1, p1(-1.5)));
  CHECK(orbit(r1, p1(0.0)).size() == 1);
  const DunklModel z2(RootSystem::productZ2({0.8, 0.8}));
  const auto o2 = orbit(z2, p2(1, 2));
  CHECK(o2.size() == 4);
  CHECK(containsPoint(o2, p2(-1, -2)));
  CHECK(containsPoint(o2, p2(1, -2)));
  CHECK(orbitDistance(r1, p1(1.0), p1(-0.7)) == doctest::Approx(0.3));
}

TEST_CASE("model config") {
  const DunklModel m(parseModelConfig("# rank one\ndim = 1\nroots = 1; -1\nk = 1\n"));
  CHECK(m.lambda() == doctest::Approx(0.5));
  const DunklModel z(parseModelConfig("dim = 2\nroots = 1,0; -1,0; 0,1; 0,-1\nk = 0.8\n"));
  CHECK(z.exactGamma() == Rational(16, 5));
  CHECK_THROWS_AS(parseModelConfig("dim = 1\nroots = 1; -1\n"), ConfigError);
  CHECK_THROWS_AS(parseModelConfig("dim = 2\nroots = 1; -1\nk = 1\n"), ConfigError);
  CHECK_THROWS_AS(loadModel("/nonexistent/model.cfg"), ConfigError);
  CHECK(loadModel(std::string(DUNKLPOT_MODEL_DIR) + "/z2x2.cfg").dim() == 2);
}

TEST_CASE("domains") {
  const Domain ball = Domain::parse("ball:2", 2);
  CHECK(ball.contains(p2(1, 1)));
  CHECK_FALSE(ball.contains(p2(2, 1)));
  CHECK(ball.distToBoundary(p2(1, 0)) == doctest::Approx(1.0));
  CHECK((ball.projectToBoundary(p2(0, 3)) - p2(0, 2)).norm() < 1e-14);
  const Domain box = Domain::parse("box:1,2", 2);
  CHECK(box.distToBoundary(p2(0.5, 0)) == doctest::Approx(0.5));
  CHECK(box.distToBoundary(p2(2, 0)) == doctest::Approx(-1.0));
  const Domain ann = Domain::parse("annulus:1,2", 2);
  CHECK_FALSE(ann.contains(p2(0.5, 0)));
  CHECK(ann.distToBoundary(p2(1.4, 0)) == doctest::Approx(0.4));

  const DunklModel r1(RootSystem::rankOne(1.0));
  const DunklModel z2(RootSystem::productZ2({0.8, 0.8}));
  CHECK(Domain::parse("interval:-2,2", 1).isWInvariant(r1));
  CHECK_FALSE(Domain::parse("interval:0.5,1.5", 1).isWInvariant(r1));
  CHECK(ball.isWInvariant(z2));
  CHECK(box.isWInvariant(z2));
  CHECK_THROWS_AS(Domain::ball(2, -1.0), InvalidArgument);
  CHECK_THROWS_AS(Domain::parse("ball:-1", 2), ConfigError);
  CHECK_THROWS_AS(Domain::parse("blob:1", 2), ConfigError);
}

TEST_CASE("W-saturation") {
  const DunklModel r1(RootSystem::rankOne(1.0));
  const Domain u = Domain::parse("interval:0.5,1.5", 1);
  const Domain sat = wSaturate(r1, u);
  REQUIRE(sat.pieces().size() == 2);
  CHECK(sat.pieces()[0].first == doctest::Approx(-1.5));
  CHECK(sat.pieces()[0].second == doctest::Approx(-0.5));
  CHECK(sat.pieces()[1].first == doctest::Approx(0.5));
  CHECK(sat.pieces()[1].second == doctest::Approx(1.5));
  CHECK(sat.isWInvariant(r1));
}
