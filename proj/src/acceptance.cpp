#include "dunklpot/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>

#include "dunklpot/csv.hpp"
#include "dunklpot/field.hpp"
#include "dunklpot/grid_solver.hpp"
#include "dunklpot/kernels.hpp"
#include "dunklpot/means.hpp"
#include "dunklpot/monte_carlo.hpp"
#include "dunklpot/operator.hpp"

namespace dunklpot {

namespace {

const char* const kRankOne = "dim = 1\nroots = 1; -1\nk = 1\n";
const char* const kZ2 = "dim = 2\nroots = 1,0; -1,0; 0,1; 0,-1\nk = 4/5\n";
const char* const kDihedral =
    "dim = 2\nroots = 1,0; -1,0; 0.5,0.8660254037844386; -0.5,-0.8660254037844386; "
    "-0.5,0.8660254037844386; 0.5,-0.8660254037844386\nk = 1/2\n";

DunklModel model(const char* text) { return DunklModel(parseModelConfig(text)); }

Point pt(double a) { return Point::Constant(1, a); }
Point pt(double a, double b) {
  Point p(2);
  p << a, b;
  return p;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

void save(const SuiteOptions& o, const std::string& name, const CsvTable& t) {
  if (o.outDir.empty()) return;
  std::filesystem::create_directories(o.outDir);
  emitCsv(t, (std::filesystem::path(o.outDir) / name).string());
}

CsvTable table(std::vector<std::string> header) {
  CsvTable t;
  t.header = std::move(header);
  return t;
}

// ---------------------------------------------------------------- 1

CriterionResult symbolic(const SuiteOptions& o) {
  CriterionResult r;
  CsvTable t = table({"model", "check", "value"});
  bool exact = true;
  double fdErr = 0.0;
  const std::vector<std::pair<std::string, const char*>> models{{"rank1", kRankOne}, {"z2x2", kZ2}, {"dihedral3", kDihedral}};
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  for (const auto& [name, text] : models) {
    const DunklModel m = model(text);
    const int d = m.dim();
    for (int i = 0; i < d; ++i) {
      const RationalPoly out = dunklLaplacianPoly(m, RationalPoly::variable(d, i));
      exact = exact && out.isZero();
      t.add({name, "Dk x" + std::to_string(i + 1), out.isZero() ? "0" : formatPoly(out)});
    }
    const RationalPoly sq = dunklLaplacianPoly(m, RationalPoly::squaredNorm(d));
    const Rational expect = Rational(2 * d) + 2 * m.exactGamma();
    const bool constOk = sq == RationalPoly::constant(d, expect);
    exact = exact && constOk;
    t.add({name, "Dk |x|^2", formatPoly(sq)});
    t.add({name, "2d+2gamma", formatRational(expect)});

    const char* text2 = d == 1 ? "x1^4 - 2*x1^3 + 3/2*x1 + 1" : "x1^4 - 2*x1^3*x2 + 3*x1*x2^2 + x2 - 1/2";
    const RationalPoly p = parsePoly(text2, d);
    const RealPoly exactLap = dunklLaplacianPoly(m, p).cast<double>();
    const RealPoly pr = p.cast<double>();
    auto f = [&](const Point& x) { return pr.evaluate(x); };
    double worst = 0.0;
    for (int n = 0; n < 50; ++n) {
      Point x(d);
      for (int i = 0; i < d; ++i) x(i) = coord(rng);
      const double want = exactLap.evaluate(x);
      const double got = dunklLaplacianFn(m, f, x, 1e-4);
      worst = std::max(worst, std::abs(got - want) / std::max(1.0, std::abs(want)));
    }
    fdErr = std::max(fdErr, worst);
    t.add({name, "fd max rel err (50 pts)", formatNumber(worst)});
  }
  save(o, "c01_symbolic.csv", t);
  r.checksPassed = exact && fdErr < 1e-5;
  r.detail = std::string(exact ? "exact identities hold" : "exact identity FAILED") + ", fd err " + num(fdErr);
  return r;
}

// ---------------------------------------------------------------- 2

CriterionResult heat(const SuiteOptions& o) {
  CriterionResult r;
  const KernelContext ctx(model(kRankOne));
  CsvTable t = table({"check", "t", "x", "value"});
  double normErr = 0.0;
  for (double tt : {0.1, 1.0}) {
    for (double x : {0.0, 1.0, 2.0}) {
      const double v = semigroupApply(ctx, tt, constantField(1, 1.0), pt(x));
      normErr = std::max(normErr, std::abs(v - 1.0));
      t.add({"normalization", formatNumber(tt), formatNumber(x), formatNumber(v)});
    }
  }
  // P_t P_s f = P_{t+s} f for f = 1_{[-1,1]}
  const Field f = indicatorField(pt(-1.0), pt(1.0));
  const double ts = 0.1;
  Field inner;
  inner.dim = 1;
  inner.eval = [&](const Point& y) { return semigroupApply(ctx, ts, f, y); };
  inner.breaks = {{-1.0, 1.0}};
  double compErr = 0.0;
  for (double x : {0.0, 0.5, 1.5}) {
    const double lhs = semigroupApply(ctx, ts, inner, pt(x));
    const double rhs = semigroupApply(ctx, 2.0 * ts, f, pt(x));
    compErr = std::max(compErr, std::abs(lhs - rhs));
    t.add({"composition", formatNumber(ts), formatNumber(x), formatNumber(lhs - rhs)});
  }
  // Pointwise Gaussian bound.
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> time(0.05, 2.0), c(-3.0, 3.0);
  const KernelContext z2(model(kZ2));
  long violations = 0;
  double worstRatio = 0.0;
  for (int n = 0; n < 1000; ++n) {
    const double tt = time(rng);
    const Point x = pt(c(rng)), y = pt(c(rng));
    const double p = heatKernel(ctx, tt, x, y);
    const double b = heatKernelBound(ctx, tt, x, y);
    worstRatio = std::max(worstRatio, p / b);
    if (p > b * (1.0 + 1e-10)) ++violations;
  }
  for (int n = 0; n < 1000; ++n) {
    const double tt = time(rng);
    const Point x = pt(c(rng), c(rng)), y = pt(c(rng), c(rng));
    const double p = heatKernel(z2, tt, x, y);
    const double b = heatKernelBound(z2, tt, x, y);
    worstRatio = std::max(worstRatio, p / b);
    if (p > b * (1.0 + 1e-10)) ++violations;
  }
  t.add({"bound violations (2000 triples)", "", "", formatNumber(violations)});
  t.add({"max p/bound", "", "", formatNumber(worstRatio)});
  save(o, "c02_heat.csv", t);
  r.checksPassed = normErr <= 1e-6 && compErr < 1e-4 && violations == 0;
  r.detail = "norm err " + num(normErr) + ", composition " + num(compErr) + ", bound violations " +
             std::to_string(violations);
  return r;
}

// ---------------------------------------------------------------- 3

// int_0^inf p_t(x, y) dt with u = c/(4t), u = w^{1/lambda}; smooth in w.
double timeIntegratedHeat(const KernelContext& ctx, const Point& x, const Point& y) {
  const double lambda = ctx.lambda();
  const double c = x.squaredNorm() + y.squaredNorm();
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double u = std::pow(w, 1.0 / lambda);
    const double tt = c / (4.0 * u);
    return heatKernel(ctx, tt, x, y) * c / (4.0 * u * u) * std::pow(w, 1.0 / lambda - 1.0) / lambda;
  };
  const double top = std::pow(200.0, lambda);
  std::vector<double> breaks;
  for (double u : {0.25, 1.0, 4.0, 16.0, 64.0}) breaks.push_back(std::pow(u, lambda));
  return integrate(integrand, 0.0, top, breaks, {1e-12, 30});
}

CriterionResult green(const SuiteOptions& o) {
  CriterionResult r;
  const KernelContext r1(model(kRankOne));
  const KernelContext z2(model(kZ2));
  CsvTable t = table({"check", "model", "x", "y", "value", "reference"});
  auto coords = [](const Point& p) {
    std::string s;
    for (Eigen::Index i = 0; i < p.size(); ++i) s += (i ? " " : "") + formatNumber(p(i));
    return s;
  };
  double originErr = 0.0;
  for (int n = 0; n < 20; ++n) {
    const bool one = n < 10;
    const KernelContext& ctx = one ? r1 : z2;
    const double s = 0.25 + 0.3 * n;
    const Point x = one ? pt(n % 2 ? -s : s) : pt(std::cos(0.7 * n) * (s - 2.8), std::sin(0.7 * n) * (s - 2.8));
    const Point zero = Point::Zero(x.size());
    const double closed = 1.0 / (2.0 * ctx.dk() * ctx.lambda() * std::pow(x.norm(), 2.0 * ctx.lambda()));
    const double g = greenFunction(ctx, x, zero);
    const double viaHeat = timeIntegratedHeat(ctx, x, zero);
    originErr = std::max({originErr, std::abs(g / closed - 1.0), std::abs(viaHeat / closed - 1.0)});
    t.add({"G(x,0)", one ? "rank1" : "z2x2", coords(x), "0", formatNumber(g), formatNumber(closed)});
  }
  // Off the origin the mu-route against the time integral of the heat kernel.
  double pairErr = 0.0;
  for (auto [a, b] : std::vector<std::pair<double, double>>{{1.0, 0.3}, {-0.8, 1.7}, {2.0, -0.5}, {0.4, 0.9}}) {
    const double g = greenFunction(r1, pt(a), pt(b));
    const double viaHeat = timeIntegratedHeat(r1, pt(a), pt(b));
    pairErr = std::max(pairErr, std::abs(g / viaHeat - 1.0));
    t.add({"G(x,y) vs int p_t dt", "rank1", formatNumber(a), formatNumber(b), formatNumber(g), formatNumber(viaHeat)});
  }
  // Orbit-distance bound.
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(-3.0, 3.0);
  long violations = 0;
  for (int n = 0; n < 200; ++n) {
    const bool one = n < 100;
    const KernelContext& ctx = one ? r1 : z2;
    const Point x = one ? pt(c(rng)) : pt(c(rng), c(rng));
    const Point y = one ? pt(c(rng)) : pt(c(rng), c(rng));
    if (greenFunction(ctx, x, y) > greenBound(ctx, x, y) * (1.0 + 1e-9)) ++violations;
  }
  t.add({"bound violations (200 pairs)", "", "", "", formatNumber(violations), "0"});
  // G(Delta_k phi) = -phi for a bump across the hyperplane.
  const Point centre = pt(0.3);
  const double rho = 0.8;
  const Field phi = bumpField(centre, rho);
  Field lap;
  lap.dim = 1;
  lap.eval = [&](const Point& z) { return dunklLaplacianJet(r1.model(), phi.jet, z); };
  // Delta_k phi also sees phi(-x), so its support is the symmetrized one.
  lap.support = std::make_pair(pt(-0.3 - rho), pt(0.3 + rho));
  lap.breaks = {{-0.3, 0.0, 0.3, rho - 0.3, 0.3 - rho}};
  double distErr = 0.0;
  for (double y : {-0.6, -0.2, 0.0, 0.25, 0.6, 1.5}) {
    const double lhs = greenApply(r1, lap, pt(y));
    distErr = std::max(distErr, std::abs(lhs + phi(pt(y))));
    t.add({"G(Dk phi)(y) + phi(y)", "rank1", "", formatNumber(y), formatNumber(lhs + phi(pt(y))), "0"});
  }
  save(o, "c03_green.csv", t);
  r.checksPassed = originErr < 1e-8 && pairErr < 1e-6 && violations == 0 && distErr < 1e-4;
  r.detail = "G(x,0) rel err " + num(originErr) + ", mu vs heat " + num(pairErr) + ", bound violations " +
             std::to_string(violations) + ", distributional residual " + num(distErr);
  return r;
}

// ---------------------------------------------------------------- 4

CriterionResult means(const SuiteOptions& o) {
  CriterionResult r;
  const KernelContext ctx(model(kRankOne));
  CsvTable t = table({"check", "x", "r", "y", "value", "reference"});
  auto one = [](const Point&) { return 1.0; };
  double massErr = 0.0;
  for (auto [x, rad, h] : std::vector<std::tuple<double, double, double>>{
           {2.0, 0.5, 0.02}, {0.3, 0.5, 0.02}, {0.0, 1.0, 0.05}, {-1.0, 0.4, 0.01}}) {
    const double m = sphericalMean(ctx, one, pt(x), rad, h);
    massErr = std::max(massErr, std::abs(m - 1.0));
    t.add({"M(1)", formatNumber(x), formatNumber(rad), "", formatNumber(m), "1"});
  }
  double oracleErr = 0.0;
  int equal = 0, strict = 0;
  bool inequalityOk = true;
  for (double y0 : {0.7, -1.2, 2.0, 0.4}) {
    const Point y = pt(y0);
    auto g = [&](const Point& z) { return greenFunction(ctx, z, y); };
    for (auto [x, rad] : std::vector<std::pair<double, double>>{
             {y0 + 0.9, 0.5}, {y0 + 0.2, 0.5}, {-y0 + 0.1, 0.3}, {1.0, 1.5}, {2.5, 0.3}}) {
      const double oracle = greenMeanOracle(ctx, pt(x), rad, y);
      const double mean = sphericalMean(ctx, g, pt(x), rad, rad / 50.0);
      const double gxy = greenFunction(ctx, pt(x), y);
      const bool separated = orbitDistance(ctx.model(), pt(x), y) > rad;
      (separated ? equal : strict)++;
      if (oracle > gxy * (1.0 + 1e-9)) inequalityOk = false;
      if (separated && std::abs(oracle / gxy - 1.0) > 1e-8) inequalityOk = false;
      oracleErr = std::max(oracleErr, std::abs(mean / oracle - 1.0));
      t.add({separated ? "M(G_y) equality" : "M(G_y) inequality", formatNumber(x), formatNumber(rad), formatNumber(y0),
             formatNumber(mean), formatNumber(oracle)});
    }
  }
  double kernelErr = 0.0;
  for (auto [x, tt, y] : std::vector<std::tuple<double, double, double>>{{1, 0.5, 2},
                                                                         {0, 0.5, 2},
                                                                         {0, 1, 1.5},
                                                                         {1, 0.5, 0},
                                                                         {-0.7, 0.3, 3},
                                                                         {2, 0.8, 1},
                                                                         {0.5, 0.25, -2},
                                                                         {1.5, 1.0, 0.5},
                                                                         {-1.2, 0.6, -1.5},
                                                                         {0.2, 0.1, 4}}) {
    const KernelMeanResult k = kernelMeanCheck(ctx, pt(x), tt, pt(y));
    kernelErr = std::max(kernelErr, k.residual);
    t.add({"kernel mean residual", formatNumber(x), formatNumber(tt), formatNumber(y), formatNumber(k.residual), "0"});
  }
  save(o, "c04_means.csv", t);
  r.checksPassed = massErr <= 1e-6 && oracleErr < 1e-3 && equal > 0 && strict > 0 && inequalityOk && kernelErr < 5e-3;
  r.detail = "M(1) err " + num(massErr) + ", oracle rel diff " + num(oracleErr) + " (" + std::to_string(equal) +
             " equality, " + std::to_string(strict) + " strict), kernel residual " + num(kernelErr);
  return r;
}

// ---------------------------------------------------------------- 5

CriterionResult excessivity(const SuiteOptions& o) {
  CriterionResult r;
  const KernelContext ctx(model(kRankOne));
  const Field f = indicatorField(pt(-1.0), pt(1.0));
  CsvTable t = table({"check", "t", "x", "value"});
  double worst = -1.0;
  for (double tt : {0.1, 1.0}) {
    for (double x : {0.0, 0.5, 1.5, 3.0}) {
      const double v = excessivityCheck(ctx, f, {tt}, {pt(x)});
      worst = std::max(worst, v);
      t.add({"PtGf - Gf", formatNumber(tt), formatNumber(x), formatNumber(v)});
    }
  }
  const double decomp = greenDecompositionResidual(ctx, f, 0.5, pt(0.5));
  t.add({"decomposition residual", "0.5", "0.5", formatNumber(decomp)});
  save(o, "c05_excessivity.csv", t);
  r.checksPassed = worst <= 1e-4 && std::abs(decomp) < 1e-4;
  r.detail = "max(PtGf - Gf) " + num(worst) + ", decomposition residual " + num(decomp);
  return r;
}

// ---------------------------------------------------------------- 6

CriterionResult minPrinciple(const SuiteOptions& o) {
  CriterionResult r;
  const KernelContext ctx(model(kRankOne));
  const Domain omega = Domain::parse("interval:-2,2", 1);
  std::vector<Point> grid;
  for (int i = 1; i < 20; ++i) grid.push_back(pt(-2.0 + 0.2 * i));
  const Field gphi = greenPotentialField(ctx, indicatorField(pt(-1.0), pt(1.0)), -3.0, 3.0, 601);
  const MinimumPrincipleReport pos = minimumPrincipleCheck(ctx, gphi, omega, grid, 1e-6);
  const MinimumPrincipleReport neg = minimumPrincipleCheck(ctx, [](const Point&) { return -1.0; }, omega, grid, 1e-6);
  const MinimumPrincipleReport zero = minimumPrincipleCheck(ctx, [](const Point&) { return 0.0; }, omega, grid, 1e-6);
  CsvTable t = table({"f", "boundaryMin", "maxMeanExcess", "interiorMin", "asserted", "holds"});
  for (const auto& [name, rep] : std::vector<std::pair<std::string, MinimumPrincipleReport>>{
           {"G phi", pos}, {"-1", neg}, {"0", zero}}) {
    t.add({name, formatNumber(rep.boundaryMin), formatNumber(rep.maxMeanExcess), formatNumber(rep.interiorMin),
           rep.conclusionAsserted ? "1" : "0", rep.conclusionHolds ? "1" : "0"});
  }
  save(o, "c06_minprinciple.csv", t);
  const bool flagged = !neg.boundaryOk && !neg.conclusionAsserted;
  r.checksPassed = pos.conclusionAsserted && pos.conclusionHolds && flagged && zero.conclusionHolds;
  r.detail = "G phi: " + pos.summary() + " | f = -1: " + neg.summary();
  return r;
}

// ---------------------------------------------------------------- 7

McConfig specConfig(long paths) {
  McConfig cfg;
  cfg.paths = paths;
  cfg.step = 1e-4;
  cfg.eps = 1e-4;
  cfg.seed = 42;
  return cfg;
}

CriterionResult dirichlet(const SuiteOptions& o) {
  CriterionResult r;
  CsvTable t = table({"model", "query", "fd", "mc", "mcStdError", "tolerance"});
  // Rank one, linear data.
  const DunklModel r1 = model(kRankOne);
  const Domain v1 = Domain::parse("interval:-2,2", 1);
  auto linear = [](const Point& p) { return p(0); };
  const double h = 0.01;
  const GridSolution fd1 = solveFd(r1, v1, linear, h);
  double fdErr = 0.0;
  for (std::size_t i = 0; i < fd1.nodes.size(); ++i) fdErr = std::max(fdErr, std::abs(fd1.values[i] - fd1.nodes[i](0)));
  save(o, "c07_fd_rank1.csv", gridSolutionTable(fd1));
  const std::vector<McEstimate> mc1 = solveDirichletMc(r1, v1, linear, {pt(0.5)}, specConfig(100000));
  const double u05 = fd1.interpolate(pt(0.5));
  bool mcOk = std::abs(mc1[0].mean - u05) <= 3.0 * mc1[0].stdError;
  t.add({"rank1", "0.5", formatNumber(u05), formatNumber(mc1[0].mean), formatNumber(mc1[0].stdError),
         formatNumber(3.0 * mc1[0].stdError)});
  double worstZ = std::abs(mc1[0].mean - u05) / mc1[0].stdError;

  // Z2 x Z2 ball, data x1^2 + x1 x2.
  const DunklModel z2 = model(kZ2);
  const Domain ball = Domain::parse("ball:1", 2);
  auto data = [](const Point& p) { return p(0) * p(0) + p(0) * p(1); };
  const GridSolution coarse = solveFd(z2, ball, data, 0.04);
  const GridSolution fine = solveFd(z2, ball, data, 0.02);
  const std::vector<Point> queries{pt(0.3, 0.4), pt(-0.5, 0.1), pt(0.2, -0.6)};
  double c = 0.0;
  for (const Point& q : queries) {
    c = std::max(c, std::abs(coarse.interpolate(q) - fine.interpolate(q)) / (0.04 * 0.04 - 0.02 * 0.02));
  }
  const std::vector<McEstimate> mc2 = solveDirichletMc(z2, ball, data, queries, specConfig(100000));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    const double u = fine.interpolate(queries[i]);
    const double tol = 3.0 * mc2[i].stdError + c * 0.02 * 0.02;
    mcOk = mcOk && std::abs(mc2[i].mean - u) <= tol;
    worstZ = std::max(worstZ, std::abs(mc2[i].mean - u) / mc2[i].stdError);
    t.add({"z2x2", formatNumber(queries[i](0)) + " " + formatNumber(queries[i](1)), formatNumber(u),
           formatNumber(mc2[i].mean), formatNumber(mc2[i].stdError), formatNumber(tol)});
  }
  save(o, "c07_dirichlet.csv", t);
  r.checksPassed = fdErr <= 2.0 * h * h && mcOk && fd1.residual < 1e-10 && fine.residual < 1e-10;
  r.detail = "rank-one fd err " + num(fdErr) + " (limit " + num(2.0 * h * h) + "), worst |mc - fd|/sigma " +
             num(worstZ) + ", C " + num(c);
  return r;
}

// ---------------------------------------------------------------- 8

CriterionResult harmonicMeasure(const SuiteOptions& o) {
  CriterionResult r;
  const DunklModel r1 = model(kRankOne);
  const McConfig cfg = specConfig(100000);
  const Domain u = Domain::parse("interval:0.5,1.5", 1);
  auto reflected = [](const Point& p) { return (p(0) > -1.5 && p(0) < -0.5) ? 1.0 : 0.0; };
  const HarmonicMeasure hu = harmonicMeasureEstimate(r1, u, pt(1.0), reflected, cfg);
  const double audit = supportAudit(hu.exits, u, r1, cfg.snapTol);
  save(o, "c08_exits_u.csv", exitCloudTable(hu.exits, 1));

  const Domain v = Domain::parse("interval:-1,1", 1);
  const HarmonicMeasure hv = harmonicMeasureEstimate(r1, v, pt(0.5), [](const Point&) { return 1.0; }, cfg);
  const double off = boundaryMassFraction(hv.exits, v, cfg.snapTol);
  const double auditV = supportAudit(hv.exits, v, r1, cfg.snapTol);
  save(o, "c08_exits_v.csv", exitCloudTable(hv.exits, 1));

  CsvTable t = table({"domain", "x0", "quantity", "value"});
  t.add({"(0.5,1.5)", "1", "violation fraction", formatNumber(audit)});
  t.add({"(0.5,1.5)", "1", "mass in (-1.5,-0.5)", formatNumber(hu.estimate.mean)});
  t.add({"(-1,1)", "0.5", "mass off boundary", formatNumber(off)});
  t.add({"(-1,1)", "0.5", "violation fraction", formatNumber(auditV)});
  save(o, "c08_harmonic_measure.csv", t);
  r.checksPassed = audit <= 1e-3 && hu.estimate.mean > 0.0 && off <= 1e-3 && auditV <= 1e-3;
  r.detail = "violations " + num(audit) + ", reflected mass " + num(hu.estimate.mean) + ", off-boundary mass " +
             num(off);
  return r;
}

// ---------------------------------------------------------------- 9

CriterionResult symmetry(const SuiteOptions& o) {
  CriterionResult r;
  const KernelContext ctx(model(kRankOne));
  const Domain v = Domain::parse("interval:-2,2", 1);
  const McConfig cfg = specConfig(200000);
  const Point x = pt(0.5), y = pt(1.0);
  const SymmetryResult s = greenSymmetryCheck(ctx, v, x, y, cfg);
  // Exterior pole: H_V G_z (x) = G(x, z) for z outside the closure of V.
  const Point z = pt(3.0);
  // Reuses the exit cloud from x.
  std::vector<double> gzAtExit;
  for (const ExitRecord& e : s.exitsFromX) gzAtExit.push_back(greenFunction(ctx, e.exitPoint, z));
  const HarmonicMeasure hx{summarize(gzAtExit), {}};
  const double exact = greenFunction(ctx, x, z);
  const double extErr = std::abs(hx.estimate.mean - exact);
  const double kernelTol = 1e-6;
  CsvTable t = table({"quantity", "value"});
  t.add({"H G_y(x)", formatNumber(s.hxy)});
  t.add({"H G_x(y)", formatNumber(s.hyx)});
  t.add({"residual", formatNumber(s.residual)});
  t.add({"sigma", formatNumber(s.sigma)});
  t.add({"H G_z(x), z = 3", formatNumber(hx.estimate.mean)});
  t.add({"G(x, z)", formatNumber(exact)});
  t.add({"exterior sigma", formatNumber(hx.estimate.stdError)});
  save(o, "c09_symmetry.csv", t);
  r.checksPassed = s.residual <= 3.0 * s.sigma + kernelTol && extErr <= 3.0 * hx.estimate.stdError + kernelTol;
  r.detail = "residual " + num(s.residual) + " vs 3 sigma " + num(3.0 * s.sigma) + ", exterior error " + num(extErr) +
             " vs " + num(3.0 * hx.estimate.stdError);
  return r;
}

// ---------------------------------------------------------------- 10

CriterionResult bridge(const SuiteOptions& o) {
  CriterionResult r;
  const KernelContext ctx(model(kRankOne));
  const Field f = bumpField(pt(0.8), 0.5);
  const double tt = 0.25;
  const Point x0 = pt(0.5);
  const McEstimate mc = semigroupEstimate(ctx.model(), f, x0, tt, specConfig(100000));
  const double exact = semigroupApply(ctx, tt, f, x0);
  CsvTable t = table({"quantity", "value"});
  t.add({"mc", formatNumber(mc.mean)});
  t.add({"mcStdError", formatNumber(mc.stdError)});
  t.add({"semigroupApply", formatNumber(exact)});
  save(o, "c10_bridge.csv", t);
  r.checksPassed = std::abs(mc.mean - exact) <= 3.0 * mc.stdError;
  r.detail = "mc " + num(mc.mean) + " +- " + num(mc.stdError) + ", P_t f " + num(exact);
  return r;
}

// ---------------------------------------------------------------- 11

std::string determinismWorkload() {
  const DunklModel r1 = model(kRankOne);
  McConfig cfg = specConfig(2000);
  const Domain u = Domain::parse("interval:0.5,1.5", 1);
  const HarmonicMeasure hu = harmonicMeasureEstimate(r1, u, pt(1.0), [](const Point&) { return 1.0; }, cfg);
  std::string out = renderCsv(exitCloudTable(hu.exits, 1));
  const McEstimate free = semigroupEstimate(r1, bumpField(pt(0.8), 0.5), pt(0.5), 0.25, specConfig(500));
  out += formatNumber(free.mean) + "," + formatNumber(free.stdError) + "\n";
  out += renderCsv(gridSolutionTable(solveFd(model(kZ2), Domain::parse("ball:1", 2),
                                             [](const Point& p) { return p(0) * p(0); }, 0.1)));
  return out;
}

CriterionResult determinism(const SuiteOptions& o) {
  CriterionResult r;
  const char* previous = std::getenv("DUNKLPOT_THREADS");
  const std::string saved = previous ? previous : "";
  setenv("DUNKLPOT_THREADS", "1", 1);
  const std::string a = determinismWorkload();
  setenv("DUNKLPOT_THREADS", "3", 1);
  const std::string b = determinismWorkload();
  if (previous) {
    setenv("DUNKLPOT_THREADS", saved.c_str(), 1);
  } else {
    unsetenv("DUNKLPOT_THREADS");
  }
  CsvTable t = table({"quantity", "value"});
  t.add({"bytes", formatNumber(static_cast<long>(a.size()))});
  t.add({"identical", a == b ? "1" : "0"});
  save(o, "c11_determinism.csv", t);
  r.checksPassed = a == b;
  r.detail = a == b ? "repeat with 1 and 3 workers byte-identical (" + std::to_string(a.size()) + " bytes)"
                    : "outputs differ between repeats";
  return r;
}

struct Entry {
  const char* name;
  double budget;
  CriterionResult (*run)(const SuiteOptions&);
};

const std::map<int, Entry>& registry() {
  static const std::map<int, Entry> entries{
      {1, {"symbolic calculus", 1.0, symbolic}},     {2, {"heat kernel", 30.0, heat}},
      {3, {"green identities", 60.0, green}},        {4, {"spherical means", 120.0, means}},
      {5, {"excessivity", 60.0, excessivity}},       {6, {"minimum principle", 30.0, minPrinciple}},
      {7, {"dirichlet agreement", 600.0, dirichlet}}, {8, {"harmonic measure support", 300.0, harmonicMeasure}},
      {9, {"green symmetry", 300.0, symmetry}},      {10, {"semigroup bridge", 120.0, bridge}},
      {11, {"determinism", 0.0, determinism}},
  };
  return entries;
}

}  // namespace

std::string CriterionResult::line() const {
  std::ostringstream os;
  os << (pass() ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << detail << " [" << num(seconds)
     << " s";
  if (budgetSeconds > 0.0) os << " of " << num(budgetSeconds) << " s";
  os << "]";
  return os.str();
}

std::vector<int> suiteCriteria(const std::string& suite) {
  static const std::map<std::string, std::vector<int>> suites{
      {"symbolic", {1}},     {"heat", {2}},          {"green", {3}},          {"kernels", {2, 3, 5}},
      {"means", {4}},        {"excessivity", {5}},   {"minprinciple", {6}},   {"dirichlet", {7}},
      {"harmonic-measure", {8}}, {"symmetry", {9}}, {"bridge", {10}},        {"determinism", {11}},
      {"all", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11}},
  };
  const auto it = suites.find(suite);
  if (it == suites.end()) throw ConfigError("unknown suite '" + suite + "'");
  return it->second;
}

CriterionResult runCriterion(int id, const SuiteOptions& opts) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw ConfigError("unknown criterion " + std::to_string(id));
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = it->second.run(opts);
  } catch (const std::exception& e) {
    r.checksPassed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.id = id;
  r.name = it->second.name;
  r.budgetSeconds = it->second.budget;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> runSuite(const std::string& suite, const SuiteOptions& opts,
                                      const std::function<void(const CriterionResult&)>& report) {
  std::vector<CriterionResult> out;
  for (int id : suiteCriteria(suite)) {
    out.push_back(runCriterion(id, opts));
    if (report) report(out.back());
  }
  return out;
}

}  // namespace dunklpot
