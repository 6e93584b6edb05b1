#include "dunklpot/means.hpp"

#include "dunklpot/intertwine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace dunklpot {

namespace {

QuadTol meanTolerance(const KernelContext& ctx) {
  // Six nested levels in d = 3; tighter settings are not affordable there.
  return ctx.model().dim() == 1 ? ctx.policy().quad : QuadTol{1e-6, 10};
}

}  // namespace

double bumpProfile(double u) {
  const double q = 1.0 - u * u;
  if (!(q > 0.0)) return 0.0;
  return std::exp(1.0 - 1.0 / q);
}

Mollifier Mollifier::make(const KernelContext& ctx, double r, double h) {
  if (!(r > 0.0) || !(h > 0.0)) throw InvalidArgument("Mollifier: r and h must be positive");
  if (!(h < r)) throw InvalidArgument("Mollifier: need h < r");
  const double power = 2.0 * ctx.lambda() + 1.0;
  auto f = [&](double u) { return bumpProfile(u) * std::pow(r + h * u, power); };
  const double mass = h * integrate(f, -1.0, 1.0, {0.0}, {1e-13, 12});
  Mollifier m;
  m.r = r;
  m.h = h;
  m.scale = 1.0 / (ctx.dk() * mass);
  return m;
}

double Mollifier::operator()(double s) const { return scale * bumpProfile((s - r) / h); }

double Mollifier::normalization(const KernelContext& ctx) const {
  const double power = 2.0 * ctx.lambda() + 1.0;
  auto f = [&](double s) { return (*this)(s)*std::pow(s, power); };
  return ctx.dk() * integrate(f, r - h, r + h, {r - h / 2.0, r, r + h / 2.0}, {1e-12, 12});
}

double windowedRadial(const KernelContext& ctx, const Point& x, const Point& y,
                      const std::function<double(double)>& profileOfV2, double v2lo, double v2hi, QuadTol tol) {
  const DunklModel& model = ctx.model();
  model.requireProductZ2("windowedRadial");
  const int d = model.dim();
  double base = x.squaredNorm() + y.squaredNorm();
  std::vector<double> coeff;
  std::vector<double> mult;
  for (int i = 0; i < d; ++i) {
    const double k = model.axisMultiplicity(i);
    const double c = 2.0 * x(i) * y(i);
    if (c == 0.0) continue;
    if (k == 0.0) {
      base -= c;
      continue;
    }
    coeff.push_back(c);
    mult.push_back(k);
  }
  const std::size_t n = coeff.size();
  std::vector<double> tail(n + 1, 0.0);
  for (std::size_t j = n; j-- > 0;) tail[j] = tail[j + 1] + std::abs(coeff[j]);

  std::function<double(std::size_t, double)> level = [&](std::size_t j, double s) -> double {
    if (j == n) return (s > v2lo && s < v2hi) ? profileOfV2(s) : 0.0;
    const double c = coeff[j];
    // v2 = s - c t - rest, |rest| <= tail[j+1]
    const double a = (s - v2hi - tail[j + 1]) / c;
    const double b = (s - v2lo + tail[j + 1]) / c;
    const double lo = std::max(-1.0, std::min(a, b));
    const double hi = std::min(1.0, std::max(a, b));
    if (!(lo < hi)) return 0.0;
    std::vector<double> breaks;
    if (j + 1 == n) breaks.push_back((s - 0.5 * (v2lo + v2hi)) / c);
    const double k = mult[j];
    auto g = [&](double t) { return level(j + 1, s - c * t); };
    return integrateJacobiWeighted(g, k - 1.0, k, lo, hi, breaks, tol) / jacobiMass(k - 1.0, k);
  };
  return level(0, base);
}

namespace {

// Plane case with the intertwiner parameters outermost. For fixed t the phase
// |x|^2 + |y|^2 - 2 sum x_i y_i t_i equals |y - c|^2 + rho^2 with c_i = t_i x_i,
// so the y-integral runs over circles about c.
double planeMean(const KernelContext& ctx, const PointFn& g, const Point& x, const Mollifier& m) {
  const DunklModel& model = ctx.model();
  const QuadTol inner{1e-6, 16};
  const double r = m.r, h = m.h;
  std::vector<int> active;
  Point c(2);
  for (int i = 0; i < 2; ++i) {
    c(i) = model.axisMultiplicity(i) == 0.0 ? x(i) : 0.0;
    if (x(i) != 0.0 && model.axisMultiplicity(i) != 0.0) active.push_back(i);
  }
  const double twoPi = 2.0 * std::numbers::pi;
  Point y(2);
  auto ring = [&](const PointFn& fn, double u) {
    std::vector<double> cuts;
    auto addAngle = [&](double a) { cuts.push_back(a < 0.0 ? a + twoPi : a); };
    if (std::abs(c(0)) < u) {
      const double a = std::acos(-c(0) / u);
      addAngle(a);
      addAngle(-a);
    }
    if (std::abs(c(1)) < u) {
      const double a = std::asin(-c(1) / u);
      addAngle(a);
      addAngle(std::numbers::pi - a);
    }
    auto f = [&](double th) {
      y(0) = c(0) + u * std::cos(th);
      y(1) = c(1) + u * std::sin(th);
      return fn(y) * weight(model, y);
    };
    return integrate(f, 0.0, twoPi, cuts, inner);
  };
  // Polar radius u about c; the shell radius is sqrt(u^2 + rho^2).
  auto shell = [&](const PointFn& fn) {
    double rho2 = 0.0;
    for (int i : active) rho2 += x(i) * x(i) - c(i) * c(i);
    rho2 = std::max(rho2, 0.0);
    const double top = (r + h) * (r + h) - rho2;
    if (!(top > 0.0)) return 0.0;
    const double lo = std::sqrt(std::max((r - h) * (r - h) - rho2, 0.0));
    const double hi = std::sqrt(top);
    std::vector<double> cuts{std::abs(c(0)), std::abs(c(1))};
    if (r * r > rho2) cuts.push_back(std::sqrt(r * r - rho2));
    auto f = [&](double u) { return m(std::sqrt(u * u + rho2)) * u * ring(fn, u); };
    return integrate(f, lo, hi, cuts, inner);
  };
  if (active.empty()) return shell(g);

  // Intertwiner parameters, outer to inner. Each level is split where the ring
  // about c touches the other axis and where rho can cross the mollifier band.
  constexpr int kOrder = 6;
  const std::array<double, 5> band{r - h, r - h / 2.0, r, r + h / 2.0, r + h};
  double sum = 0.0;
  std::function<void(std::size_t, double, double)> walk = [&](std::size_t j, double w, double rho2) {
    if (j == active.size()) {
      sum += w * shell(g);
      return;
    }
    const int i = active[j];
    const double xi2 = x(i) * x(i);
    std::vector<double> breaks;
    auto split = [&](double v) {
      if (v > 0.0 && v < 1.0) {
        breaks.push_back(std::sqrt(v));
        breaks.push_back(-std::sqrt(v));
      }
    };
    for (double sv : band) {
      split(1.0 - (sv * sv - x(1 - i) * x(1 - i)) / xi2);
      split(1.0 - (sv * sv - rho2) / xi2);
    }
    const AxisRule q = axisRule(model.axisMultiplicity(i), kOrder, breaks);
    for (std::size_t a = 0; a < q.t.size(); ++a) {
      c(i) = q.t[a] * x(i);
      walk(j + 1, w * q.w[a], rho2 + xi2 - c(i) * c(i));
    }
  };
  walk(0, 1.0, 0.0);
  return sum;
}

}  // namespace

double sphericalMean(const KernelContext& ctx, const PointFn& g, const Point& x, double r, double h) {
  const DunklModel& model = ctx.model();
  model.requireProductZ2("sphericalMean");
  const int d = model.dim();
  if (x.size() != d) throw InvalidArgument("sphericalMean: dimension mismatch");
  const Mollifier m = Mollifier::make(ctx, r, h);
  if (d == 2) return planeMean(ctx, g, x, m);
  const QuadTol tol = meanTolerance(ctx);
  const double v2lo = (r - h) * (r - h);
  const double v2hi = (r + h) * (r + h);
  auto profile = [&](double v2) { return m(std::sqrt(v2)); };

  Point lo(d), hi(d);
  std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double c = std::abs(x(i));
    lo(i) = -(c + r + h);
    hi(i) = c + r + h;
    auto& b = breaks[static_cast<std::size_t>(i)];
    b.push_back(0.0);
    for (double centre : {-c, c}) {
      b.push_back(centre);
      for (double off : {r - h, r, r + h}) {
        b.push_back(centre - off);
        b.push_back(centre + off);
      }
    }
  }
  auto integrand = [&](const Point& y) {
    double near = 0.0;
    double far = 0.0;
    for (int i = 0; i < d; ++i) {
      const double a = std::abs(x(i));
      const double c = std::abs(y(i));
      near += (a - c) * (a - c);
      far += (a + c) * (a + c);
    }
    if (near >= v2hi || far <= v2lo) return 0.0;
    const double tau = windowedRadial(ctx, x, y, profile, v2lo, v2hi, tol);
    if (tau == 0.0) return 0.0;
    return tau * g(y) * weight(model, y);
  };
  return integrateBox(integrand, lo, hi, breaks, tol);
}

double greenMeanOracle(const KernelContext& ctx, const Point& x, double t, const Point& y) {
  const DunklModel& model = ctx.model();
  model.requirePositiveLambda("greenMeanOracle");
  if (!(t > 0.0)) throw InvalidArgument("greenMeanOracle: t must be positive");
  const double lambda = ctx.lambda();
  const double t2 = t * t;
  auto profile = [&](double v2) { return std::pow(std::max(t2, v2), -lambda); };
  const RefinedIntegral out = integrateRadial(model, x, y, +1, profile, ctx.policy().green, {t2});
  return out.value / (2.0 * lambda * ctx.dk());
}

KernelMeanResult kernelMeanCheck(const KernelContext& ctx, const Point& x, double t, const Point& y, double h) {
  const DunklModel& model = ctx.model();
  if (!(t > 0.0)) throw InvalidArgument("kernelMeanCheck: t must be positive");
  if (h <= 0.0) h = t / 50.0;
  KernelMeanResult out;
  out.lhs = dunklKernelImag(model, x, y) * besselJ(ctx.lambda(), t * y.norm());
  auto re = [&](const Point& xi) { return dunklKernelImag(model, xi, y).real(); };
  auto im = [&](const Point& xi) { return dunklKernelImag(model, xi, y).imag(); };
  const double imag = y.isZero() ? 0.0 : sphericalMean(ctx, im, x, t, h);
  out.rhs = {sphericalMean(ctx, re, x, t, h), imag};
  out.residual = std::abs(out.lhs - out.rhs);
  return out;
}

HarmonicityReport harmonicityTest(const KernelContext& ctx, const PointFn& f, const Domain& v,
                                  const std::vector<HarmonicitySample>& samples, double tol) {
  if (!v.isWInvariant(ctx.model())) throw InvalidArgument("harmonicityTest: V must be W-invariant");
  for (const auto& s : samples) {
    if (!(s.t > 0.0) || !(v.distToBoundary(s.x) > s.t)) {
      throw InvalidArgument("harmonicityTest: sample ball is not inside V");
    }
  }
  HarmonicityReport report;
  for (const auto& s : samples) {
    const double dev = std::abs(sphericalMean(ctx, f, s.x, s.t, s.t / 50.0) - f(s.x));
    report.deviations.push_back(dev);
    report.maxDeviation = std::max(report.maxDeviation, dev);
  }
  report.consistent = report.maxDeviation < tol;
  return report;
}

std::string MinimumPrincipleReport::summary() const {
  std::ostringstream os;
  os << "boundary min " << boundaryMin << (boundaryOk ? "" : " (violated)") << ", max mean excess " << maxMeanExcess
     << (superMeanOk ? "" : " (violated)") << ", interior min " << interiorMin;
  if (!domainInvariant) os << ", domain not W-invariant";
  if (!conclusionAsserted) {
    os << "; hypotheses fail, no conclusion";
  } else {
    os << (conclusionHolds ? "; f >= 0 confirmed" : "; f >= 0 contradicted");
  }
  return os.str();
}

MinimumPrincipleReport minimumPrincipleCheck(const KernelContext& ctx, const PointFn& f, const Domain& omega,
                                             const std::vector<Point>& grid, double boundaryTol, double meanTol,
                                             double maxRadius) {
  MinimumPrincipleReport report;
  report.domainInvariant = omega.isWInvariant(ctx.model());
  report.boundaryMin = std::numeric_limits<double>::infinity();
  for (const Point& b : omega.boundaryMesh(64)) report.boundaryMin = std::min(report.boundaryMin, f(b));
  report.boundaryOk = report.boundaryMin >= -boundaryTol;

  report.maxMeanExcess = -std::numeric_limits<double>::infinity();
  report.interiorMin = std::numeric_limits<double>::infinity();
  for (const Point& x : grid) {
    const double dist = omega.distToBoundary(x);
    if (!(dist > 0.0)) continue;
    const double fx = f(x);
    report.interiorMin = std::min(report.interiorMin, fx);
    const double t = std::min(maxRadius, dist / 4.0);
    report.maxMeanExcess = std::max(report.maxMeanExcess, sphericalMean(ctx, f, x, t, t / 50.0) - fx);
  }
  report.superMeanOk = report.maxMeanExcess <= meanTol;
  report.conclusionAsserted = report.domainInvariant && report.boundaryOk && report.superMeanOk;
  if (report.conclusionAsserted) report.conclusionHolds = report.interiorMin >= -(boundaryTol + meanTol);
  return report;
}

}  // namespace dunklpot
