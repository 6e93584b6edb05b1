#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "dunklpot/grid_solver.hpp"
#include "dunklpot/means.hpp"
#include "dunklpot/monte_carlo.hpp"

using namespace dunklpot;

namespace {

Point p1(double a) { return Point::Constant(1, a); }
Point p2(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

const DunklModel& rankOne() {
  static const DunklModel m(RootSystem::rankOne(1.0));
  return m;
}

const DunklModel& z2() {
  static const DunklModel m(RootSystem::productZ2({0.8, 0.8}));
  return m;
}

McConfig quick(long paths, double step = 1e-3) {
  McConfig cfg;
  cfg.paths = paths;
  cfg.step = step;
  cfg.eps = 1e-4;
  cfg.seed = 7;
  return cfg;
}

}  // namespace

TEST_CASE("finite differences: constants and linear data") {
  const Domain v = Domain::parse("interval:-2,2", 1);
  const GridSolution one = solveFd(rankOne(), v, [](const Point&) { return 1.0; }, 0.05);
  for (double u : one.values) CHECK(std::abs(u - 1.0) < 1e-12);
  const double h = 0.01;
  const GridSolution lin = solveFd(rankOne(), v, [](const Point& x) { return x(0); }, h);
  double err = 0.0;
  for (std::size_t i = 0; i < lin.nodes.size(); ++i) err = std::max(err, std::abs(lin.values[i] - lin.nodes[i](0)));
  CHECK(err <= 2 * h * h);
  CHECK(lin.maximumPrincipleHolds);
  CHECK(lin.residual < 1e-12);
  CHECK(lin.interpolate(p1(0.505)) == doctest::Approx(0.505).epsilon(1e-10));
}

TEST_CASE("finite differences in two dimensions") {
  const Domain ball = Domain::parse("ball:1", 2);
  const GridSolution s = solveFd(z2(), ball, [](const Point& x) { return x(0) * x(1); }, 0.05);
  for (std::size_t i = 0; i < s.nodes.size(); ++i) CHECK(std::abs(s.values[i] - s.nodes[i](0) * s.nodes[i](1)) < 1e-10);
  // x1^2 - x2^2 is Delta_k-harmonic for equal multiplicities.
  const GridSolution q = solveFd(z2(), ball, [](const Point& x) { return x(0) * x(0) - x(1) * x(1); }, 0.05);
  for (std::size_t i = 0; i < q.nodes.size(); ++i) {
    CHECK(std::abs(q.values[i] - (q.nodes[i](0) * q.nodes[i](0) - q.nodes[i](1) * q.nodes[i](1))) < 1e-10);
  }
  CHECK(q.maximumPrincipleHolds);
  // x1^4 on a square: error shrinks like h^2 once the grid resolves the data.
  const Domain box = Domain::parse("box:1,1", 2);
  auto quartic = [](const Point& x) { return std::pow(x(0), 4); };
  const Point at = p2(0.5, 0.25);
  const double u1 = solveFd(z2(), box, quartic, 0.05).interpolate(at);
  const double u2 = solveFd(z2(), box, quartic, 0.025).interpolate(at);
  const double u3 = solveFd(z2(), box, quartic, 0.0125).interpolate(at);
  const double ratio = (u1 - u2) / (u2 - u3);
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("finite differences reject unsupported input") {
  CHECK_THROWS_AS(solveFd(rankOne(), Domain::parse("interval:0.5,1.5", 1), [](const Point&) { return 0.0; }, 0.1),
                  InvalidArgument);
  CHECK_THROWS_AS(solveFd(DunklModel(RootSystem::dihedral(3, 0.5)), Domain::parse("ball:1", 2),
                          [](const Point&) { return 0.0; }, 0.1),
                  UnsupportedError);
  // No lattice node falls inside the annulus.
  CHECK_THROWS_AS(solveFd(z2(), Domain::parse("annulus:1,2", 2), [](const Point&) { return 0.0; }, 5.0), AssemblyError);
}

TEST_CASE("mean-value consistency of the finite-difference solution") {
  const KernelContext ctx(z2());
  const Domain ball = Domain::parse("ball:1", 2);
  auto data = [](const Point& x) { return x(0) * x(0) - x(1) * x(1) + x(0) * x(1); };
  const GridSolution s = solveFd(z2(), ball, data, 0.02);
  auto u = [&](const Point& x) { return s.interpolate(x); };
  for (const Point& x : {p2(0.2, 0.1), p2(-0.3, 0.35)}) {
    CHECK(std::abs(sphericalMean(ctx, u, x, 0.25, 0.005) - u(x)) < kMeansTol + 0.02 * 0.02);
  }
}

TEST_CASE("config validation") {
  McConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.step = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = McConfig{};
  cfg.paths = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg = McConfig{};
  cfg.eps = -1.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("summary statistics") {
  const McEstimate e = summarize({1.0, 2.0, 3.0, 4.0});
  CHECK(e.mean == doctest::Approx(2.5));
  CHECK(e.stdError == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(e.n == 4);
}

TEST_CASE("exit records") {
  const Domain v = Domain::parse("interval:-1,1", 1);
  // Start outside: the Dirac mass at x0.
  const ExitRecord out = simulateExit(rankOne(), v, p1(1.5), quick(1), 0);
  CHECK(out.exitPoint(0) == 1.5);
  CHECK(out.exitTime == 0.0);
  const HarmonicMeasure outside = harmonicMeasureEstimate(rankOne(), v, p1(1.5), [](const Point& x) { return x(0); }, quick(10));
  CHECK(outside.estimate.mean == 1.5);
  // Same path id, same path.
  const ExitRecord a = simulateExit(rankOne(), v, p1(0.3), quick(1), 17);
  const ExitRecord b = simulateExit(rankOne(), v, p1(0.3), quick(1), 17);
  CHECK(a.exitPoint(0) == b.exitPoint(0));
  CHECK(a.exitTime == b.exitTime);
  CHECK(a.jumps == b.jumps);
  // Starting on the hyperplane is allowed.
  CHECK(std::abs(simulateExit(rankOne(), v, p1(0.0), quick(1), 3).exitPoint(0)) == doctest::Approx(1.0));
}

TEST_CASE("harmonic measure is a probability measure with the right support") {
  const Domain v = Domain::parse("interval:-1,1", 1);
  const HarmonicMeasure hv = harmonicMeasureEstimate(rankOne(), v, p1(0.4), [](const Point&) { return 1.0; }, quick(2000));
  CHECK(hv.estimate.mean == 1.0);
  CHECK(boundaryMassFraction(hv.exits, v, 1e-8) <= 1e-3);
  CHECK(supportAudit(hv.exits, v, rankOne(), 1e-8) <= 1e-3);

  const Domain u = Domain::parse("interval:0.5,1.5", 1);
  double previous = 1.0;
  for (double scale : {1.0, 0.5}) {
    McConfig cfg = quick(2000, 1e-3 * scale);
    cfg.eps = 1e-4 * scale;
    const HarmonicMeasure hu = harmonicMeasureEstimate(rankOne(), u, p1(1.0), [](const Point&) { return 1.0; }, cfg);
    const double audit = supportAudit(hu.exits, u, rankOne(), cfg.snapTol);
    CHECK(audit <= 1e-3);
    CHECK(audit <= previous);
    previous = audit;
    long jumped = 0;
    for (const auto& e : hu.exits) jumped += e.exitPoint(0) < 0.0 ? 1 : 0;
    CHECK(jumped > 0);
  }
}

TEST_CASE("exit mass is W-equivariant") {
  const Domain v = Domain::parse("interval:-1,1", 1);
  auto right = [](const Point& x) { return x(0) > 0.0 ? 1.0 : 0.0; };
  auto left = [](const Point& x) { return x(0) < 0.0 ? 1.0 : 0.0; };
  const McEstimate a = harmonicMeasureEstimate(rankOne(), v, p1(0.5), right, quick(3000)).estimate;
  const McEstimate b = harmonicMeasureEstimate(rankOne(), v, p1(-0.5), left, quick(3000), 100000).estimate;
  CHECK(std::abs(a.mean - b.mean) <= 3.0 * std::hypot(a.stdError, b.stdError));
}

TEST_CASE("monte carlo dirichlet solver") {
  const Domain v = Domain::parse("interval:-2,2", 1);
  const auto c = solveDirichletMc(rankOne(), v, [](const Point&) { return 2.5; }, {p1(0.3), p1(-1.0)}, quick(200));
  CHECK(c[0].mean == 2.5);
  CHECK(c[1].mean == 2.5);
  const auto lin = solveDirichletMc(rankOne(), v, [](const Point& x) { return x(0); }, {p1(0.5)}, quick(4000));
  CHECK(std::abs(lin[0].mean - 0.5) <= 3.0 * lin[0].stdError + 0.02);
  CHECK_THROWS_AS(solveDirichletMc(rankOne(), Domain::parse("interval:0,2", 1), [](const Point&) { return 0.0; },
                                   {p1(1.0)}, quick(10)),
                  InvalidArgument);
}

TEST_CASE("green symmetry at coincident points") {
  const KernelContext ctx(rankOne());
  const SymmetryResult s = greenSymmetryCheck(ctx, Domain::parse("interval:-2,2", 1), p1(0.5), p1(0.5), quick(500));
  CHECK(s.residual == 0.0);
}

TEST_CASE("exhaustion: H_{V_n} G_y decreases in n") {
  const KernelContext ctx(rankOne());
  const Domain v = Domain::parse("interval:-2,2", 1);
  const Point y = p1(1.5), x = p1(0.5);
  auto g = [&](const Point& z) { return greenFunction(ctx, z, y); };
  McEstimate previous;
  bool first = true;
  for (int n : {1, 2, 4}) {
    const Domain vn = v.shrunk(1.0 / n);
    const McEstimate e = harmonicMeasureEstimate(ctx.model(), vn, x, g, quick(2000)).estimate;
    if (!first) CHECK(e.mean <= previous.mean + 3.0 * std::hypot(e.stdError, previous.stdError));
    previous = e;
    first = false;
  }
}

TEST_CASE("results do not depend on the worker count") {
  const Domain u = Domain::parse("interval:0.5,1.5", 1);
  setenv("DUNKLPOT_THREADS", "1", 1);
  const HarmonicMeasure a = harmonicMeasureEstimate(rankOne(), u, p1(1.0), [](const Point& x) { return x(0); }, quick(300));
  setenv("DUNKLPOT_THREADS", "4", 1);
  const HarmonicMeasure b = harmonicMeasureEstimate(rankOne(), u, p1(1.0), [](const Point& x) { return x(0); }, quick(300));
  unsetenv("DUNKLPOT_THREADS");
  CHECK(a.estimate.mean == b.estimate.mean);
  for (std::size_t i = 0; i < a.exits.size(); ++i) CHECK(a.exits[i].exitPoint(0) == b.exits[i].exitPoint(0));
  CHECK(workerCount() >= 1);
}

TEST_CASE("isotropy without multiplicities") {
  const DunklModel flat(RootSystem::productZ2({0.0, 0.0}));
  const Domain ball = Domain::parse("ball:1", 2);
  std::vector<ExitRecord> exits;
  McConfig cfg = quick(4000, 1e-3);
  for (long i = 0; i < cfg.paths; ++i) exits.push_back(simulateExit(flat, ball, p2(0, 0), cfg, i));
  // Two-sided KS critical value at 1% is 1.63 / sqrt(n).
  CHECK(angularKsStatistic(exits) < 1.63 / std::sqrt(4000.0));
}
