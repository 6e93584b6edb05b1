#include "dunklpot/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace dunklpot {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrapAngle(double a) {
  a = std::fmod(a, kTwoPi);
  return a < 0.0 ? a + kTwoPi : a;
}

double circleIntegral(const DunklModel& model, int n) {
  const auto& roots = model.roots();
  // Hyperplane angles with the total multiplicity vanishing there.
  std::vector<std::pair<double, double>> planes;
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const double k = roots.multiplicity(r);
    if (k == 0.0) continue;
    const Point& a = roots.root(r);
    const double base = wrapAngle(std::atan2(a(0), -a(1)));
    for (double angle : {base, wrapAngle(base + std::numbers::pi)}) {
      bool merged = false;
      for (auto& p : planes) {
        const double diff = std::abs(p.first - angle);
        if (std::min(diff, kTwoPi - diff) < 1e-12) {
          p.second += k;
          merged = true;
          break;
        }
      }
      if (!merged) planes.emplace_back(angle, k);
    }
  }
  auto w = [&](double theta) {
    Point u(2);
    u << std::cos(theta), std::sin(theta);
    return weight(model, u);
  };
  if (planes.empty()) {
    const GaussRule& g = gaussLegendre(n);
    double sum = 0.0;
    for (Eigen::Index j = 0; j < g.nodes.size(); ++j) sum += g.weights(j) * w(std::numbers::pi * (1.0 + g.nodes(j)));
    return std::numbers::pi * sum;
  }
  std::sort(planes.begin(), planes.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < planes.size(); ++i) {
    const double lo = planes[i].first;
    const double hi = i + 1 < planes.size() ? planes[i + 1].first : planes[0].first + kTwoPi;
    const double ea = planes[i].second;
    const double eb = i + 1 < planes.size() ? planes[i + 1].second : planes[0].second;
    const GaussRule& g = gaussJacobi(n, eb, ea);
    const double half = (hi - lo) / 2.0;
    double arc = 0.0;
    for (Eigen::Index j = 0; j < g.nodes.size(); ++j) {
      const double s = g.nodes(j);
      const double theta = lo + half * (1.0 + s);
      const double singular = std::pow(half * (1.0 - s), eb) * std::pow(half * (1.0 + s), ea);
      arc += g.weights(j) * w(theta) / singular;
    }
    sum += arc * std::pow(half, ea + eb + 1.0);
  }
  return sum;
}

double sphereIntegral(const DunklModel& model, double tol) {
  const auto& roots = model.roots();
  std::vector<double> thetaBreaks{std::numbers::pi / 2.0};
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const Point& a = roots.root(r);
    const double rho = std::hypot(a(0), a(1));
    const double tb = std::atan2(std::abs(a(2)), rho);
    thetaBreaks.push_back(tb);
    thetaBreaks.push_back(std::numbers::pi - tb);
  }
  QuadTol q{tol, 20};
  auto inner = [&](double theta) {
    const double st = std::sin(theta);
    const double ct = std::cos(theta);
    std::vector<double> phiBreaks;
    for (std::size_t r = 0; r < roots.size(); ++r) {
      const Point& a = roots.root(r);
      const double rho = std::hypot(a(0), a(1));
      if (rho == 0.0 || st == 0.0) continue;
      const double c = -a(2) * ct / (rho * st);
      if (std::abs(c) > 1.0) continue;
      const double psi = std::atan2(a(1), a(0));
      const double delta = std::acos(c);
      phiBreaks.push_back(wrapAngle(psi + delta));
      phiBreaks.push_back(wrapAngle(psi - delta));
    }
    auto f = [&](double phi) {
      Point u(3);
      u << st * std::cos(phi), st * std::sin(phi), ct;
      return weight(model, u);
    };
    return st * integrate(f, 0.0, kTwoPi, phiBreaks, q);
  };
  return integrate(inner, 0.0, std::numbers::pi, thetaBreaks, q);
}

}  // namespace

double besselJ(double lambda, double z) {
  if (!(lambda > -1.0)) throw InvalidArgument("besselJ: lambda must exceed -1");
  const double az = std::abs(z);
  if (az > 12.0) {
    return std::exp(std::lgamma(lambda + 1.0) + lambda * std::log(2.0 / az)) * std::cyl_bessel_j(lambda, az);
  }
  const double q = -(az / 2.0) * (az / 2.0);
  double term = 1.0;
  double sum = 1.0;
  for (int n = 1; n < 500; ++n) {
    term *= q / (n * (n + lambda));
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum) && n > az / 2.0) break;
  }
  return sum;
}

double surfaceConstant(const DunklModel& model, int order) {
  const int d = model.dim();
  if (d == 1) {
    return weight(model, Point::Constant(1, 1.0)) + weight(model, Point::Constant(1, -1.0));
  }
  if (d == 2) {
    int n = std::max(order, 4);
    double coarse = circleIntegral(model, n);
    for (int attempt = 0; attempt < 4; ++attempt) {
      const double fine = circleIntegral(model, 2 * n);
      if (std::abs(fine - coarse) <= 1e-8 * std::abs(fine)) return fine;
      coarse = fine;
      n *= 2;
    }
    throw ToleranceError("surfaceConstant: no convergence on the circle");
  }
  if (d == 3) {
    const double coarse = sphereIntegral(model, 1e-9);
    const double fine = sphereIntegral(model, 1e-12);
    if (std::abs(fine - coarse) > 1e-8 * std::abs(fine)) throw ToleranceError("surfaceConstant: no convergence on the sphere");
    return fine;
  }
  throw UnsupportedError("surfaceConstant: only d <= 3");
}

KernelContext::KernelContext(DunklModel model, KernelPolicy policy)
    : model_(std::move(model)), dk_(surfaceConstant(model_)), policy_(std::move(policy)) {
  if (!model_.isProductZ2()) return;
  for (int i = 0; i < model_.dim(); ++i) axisModels_.emplace_back(RootSystem::rankOne(model_.axisMultiplicity(i)));
}

double heatProfile(const KernelContext& ctx, double t, double s) {
  if (!(t > 0.0)) throw InvalidArgument("heatProfile: t must be positive");
  const double lambda = ctx.lambda();
  const double logC = std::log(2.0) - std::log(ctx.dk()) - (lambda + 1.0) * std::log(4.0 * t) - std::lgamma(lambda + 1.0);
  return std::exp(logC - s * s / (4.0 * t));
}

double heatKernel(const KernelContext& ctx, double t, const Point& x, const Point& y) {
  if (!(t > 0.0)) throw InvalidArgument("heatKernel: t must be positive");
  const DunklModel& model = ctx.model();
  model.requireProductZ2("heatKernel");
  const double lambda = ctx.lambda();
  const double logC = std::log(2.0) - std::log(ctx.dk()) - (lambda + 1.0) * std::log(4.0 * t) - std::lgamma(lambda + 1.0);
  RefineOptions plain = ctx.policy().heat;
  plain.levels.clear();
  // Each axis factor is taken relative to its smallest exponent so it stays O(1).
  double logProduct = logC;
  double product = 1.0;
  Point xi(1), yi(1);
  for (int i = 0; i < model.dim(); ++i) {
    xi(0) = x(i);
    yi(0) = y(i);
    const double gap = std::abs(x(i)) - std::abs(y(i));
    const double floor2 = gap * gap;
    logProduct -= floor2 / (4.0 * t);
    auto profile = [&](double v2) { return std::exp(-std::max(v2 - floor2, 0.0) / (4.0 * t)); };
    const bool sharp = std::abs(x(i) * y(i)) / (2.0 * t) > 20.0;
    product *= integrateRadial(ctx.axisModels()[static_cast<std::size_t>(i)], xi, yi, +1, profile,
                               sharp ? ctx.policy().heat : plain)
                   .value;
    if (product == 0.0) return 0.0;
  }
  return product * std::exp(logProduct);
}

double heatKernelBound(const KernelContext& ctx, double t, const Point& x, const Point& y) {
  return heatProfile(ctx, t, x.norm() - y.norm());
}

double truncationRadius(const KernelContext& ctx, double t, const Point& x) {
  const DunklModel& model = ctx.model();
  const double logCut = -std::log(ctx.policy().truncationCutoff);
  double logScale = 0.0;
  for (std::size_t r = 0; r < model.roots().size(); ++r) {
    logScale += model.roots().multiplicity(r) * std::log(model.roots().root(r).norm());
  }
  const double growth = model.gamma() + model.dim();
  const double r0 = x.norm();
  double radius = r0 + std::sqrt(4.0 * t * logCut);
  for (int it = 0; it < 50; ++it) {
    const double budget = logCut + std::max(logScale, 0.0) + growth * std::log(std::max(1.0, radius));
    const double next = r0 + std::sqrt(4.0 * t * budget);
    if (!std::isfinite(next) || next > ctx.policy().maxRadius) {
      throw ConfigError("truncation radius exceeds the configured maximum");
    }
    if (std::abs(next - radius) < 1e-12 * next) {
      radius = next;
      break;
    }
    radius = next;
  }
  return radius;
}

double semigroupApply(const KernelContext& ctx, double t, const Field& f, const Point& x) {
  const DunklModel& model = ctx.model();
  const int d = model.dim();
  if (f.dim != d || x.size() != d) throw InvalidArgument("semigroupApply: dimension mismatch");
  const double radius = truncationRadius(ctx, t, x);
  Point lo = Point::Constant(d, -radius);
  Point hi = Point::Constant(d, radius);
  if (f.support) {
    lo = lo.cwiseMax(f.support->first);
    hi = hi.cwiseMin(f.support->second);
    if ((lo.array() >= hi.array()).any()) return 0.0;
  }
  const double spread = std::sqrt(4.0 * t);
  std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    auto& b = breaks[static_cast<std::size_t>(i)];
    if (static_cast<std::size_t>(i) < f.breaks.size()) b = f.breaks[static_cast<std::size_t>(i)];
    b.push_back(0.0);
    for (double sgn : {-1.0, 1.0}) {
      const double c = sgn * std::abs(x(i));
      b.push_back(c);
      for (double m : {0.5, 1.0, 2.0, 4.0}) {
        b.push_back(c - m * spread);
        b.push_back(c + m * spread);
      }
    }
  }
  auto integrand = [&](const Point& y) {
    const double fy = f(y);
    if (fy == 0.0) return 0.0;
    return heatKernel(ctx, t, x, y) * fy * weight(model, y);
  };
  return integrateBox(integrand, lo, hi, breaks, ctx.policy().quad);
}

RefinedIntegral greenFunctionDetailed(const KernelContext& ctx, const Point& x, const Point& y) {
  const DunklModel& model = ctx.model();
  model.requirePositiveLambda("greenFunction");
  model.requireProductZ2("greenFunction");
  const double lambda = ctx.lambda();
  const double scale = 1.0 / (2.0 * ctx.dk() * lambda);
  RefinedIntegral out;
  if (x.isZero() || y.isZero()) {
    const double r2 = x.isZero() ? y.squaredNorm() : x.squaredNorm();
    out.converged = true;
    out.value = r2 > 0.0 ? scale * std::pow(r2, -lambda) : std::numeric_limits<double>::infinity();
    out.diverged = !(r2 > 0.0);
    return out;
  }
  auto profile = [&](double v2) { return v2 > 0.0 ? std::pow(v2, -lambda) : std::numeric_limits<double>::infinity(); };
  out = integrateRadial(model, x, y, +1, profile, ctx.policy().green);
  out.value *= scale;
  return out;
}

double greenFunction(const KernelContext& ctx, const Point& x, const Point& y) {
  return greenFunctionDetailed(ctx, x, y).value;
}

double greenBound(const KernelContext& ctx, const Point& x, const Point& y) {
  const double lambda = ctx.lambda();
  return std::pow(orbitDistance(ctx.model(), x, y), -2.0 * lambda) / (2.0 * ctx.dk() * lambda);
}

double greenApply(const KernelContext& ctx, const Field& f, const Point& x) {
  const DunklModel& model = ctx.model();
  const int d = model.dim();
  if (!f.support) throw InvalidArgument("greenApply: f needs a bounded support box");
  if (f.dim != d || x.size() != d) throw InvalidArgument("greenApply: dimension mismatch");
  std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    auto& b = breaks[static_cast<std::size_t>(i)];
    if (static_cast<std::size_t>(i) < f.breaks.size()) b = f.breaks[static_cast<std::size_t>(i)];
    b.push_back(0.0);
    b.push_back(x(i));
    b.push_back(-x(i));
  }
  auto integrand = [&](const Point& y) {
    const double fy = f(y);
    if (fy == 0.0) return 0.0;
    return greenFunction(ctx, x, y) * fy * weight(model, y);
  };
  return integrateBox(integrand, f.support->first, f.support->second, breaks, ctx.policy().quad);
}

double greenApplyBound(const KernelContext& ctx, const Field& f, double supNorm, const Point& x) {
  if (!f.support) throw InvalidArgument("greenApplyBound: f needs a bounded support box");
  const double r = f.support->first.cwiseAbs().cwiseMax(f.support->second.cwiseAbs()).norm();
  return supNorm * (r + x.norm()) * (r + x.norm()) / (4.0 * ctx.lambda());
}

// G f is not compactly supported; the box comes from the heat-kernel truncation alone.
double semigroupOfPotential(const KernelContext& ctx, double t, const Field& f, const Point& x) {
  const DunklModel& model = ctx.model();
  const int d = model.dim();
  const double radius = truncationRadius(ctx, t, x);
  const double spread = std::sqrt(4.0 * t);
  std::vector<std::vector<double>> breaks(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    auto& b = breaks[static_cast<std::size_t>(i)];
    if (static_cast<std::size_t>(i) < f.breaks.size()) b = f.breaks[static_cast<std::size_t>(i)];
    b.push_back(0.0);
    for (double sgn : {-1.0, 1.0}) {
      const double c = sgn * std::abs(x(i));
      b.push_back(c);
      for (double m : {0.5, 1.0, 2.0}) {
        b.push_back(c - m * spread);
        b.push_back(c + m * spread);
      }
    }
  }
  auto integrand = [&](const Point& y) { return heatKernel(ctx, t, x, y) * greenApply(ctx, f, y) * weight(model, y); };
  QuadTol tol = ctx.policy().quad;
  tol.rel = std::max(tol.rel, 1e-8);
  return integrateBox(integrand, Point::Constant(d, -radius), Point::Constant(d, radius), breaks, tol);
}

double excessivityCheck(const KernelContext& ctx, const Field& f, const std::vector<double>& tGrid,
                        const std::vector<Point>& xGrid) {
  double worst = -std::numeric_limits<double>::infinity();
  for (const Point& x : xGrid) {
    const double gf = greenApply(ctx, f, x);
    for (double t : tGrid) worst = std::max(worst, semigroupOfPotential(ctx, t, f, x) - gf);
  }
  return worst;
}

double greenDecompositionResidual(const KernelContext& ctx, const Field& f, double t, const Point& x) {
  const double gf = greenApply(ctx, f, x);
  auto ps = [&](double s) { return semigroupApply(ctx, s, f, x); };
  QuadTol tol = ctx.policy().quad;
  tol.rel = std::max(tol.rel, 1e-8);
  const double running = integrate(ps, 0.0, t, {}, tol);
  return gf - running - semigroupOfPotential(ctx, t, f, x);
}

Field greenPotentialField(const KernelContext& ctx, const Field& f, double lo, double hi, int n) {
  Field exact;
  exact.dim = f.dim;
  exact.eval = [&ctx, f](const Point& x) { return greenApply(ctx, f, x); };
  exact.description = "green(" + f.description + ")";
  exact.breaks.assign(static_cast<std::size_t>(f.dim), {});
  return tabulatedField(exact, lo, hi, n);
}

}  // namespace dunklpot
