#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "dunklpot/domain.hpp"
#include "dunklpot/kernels.hpp"

namespace dunklpot {

inline constexpr double kMeansTol = 5e-3;

/// Radial bump F(s) = c exp(1 - 1/(1 - u^2)), u = (s - r)/h, scaled so that
/// d_k int F(s) s^{2 lambda + 1} ds = 1.
struct Mollifier {
  double r = 1.0;
  double h = 0.1;
  double scale = 1.0;

  static Mollifier make(const KernelContext& ctx, double r, double h);
  double operator()(double s) const;
  /// d_k int F(s) s^{2 lambda + 1} ds, recomputed by quadrature.
  double normalization(const KernelContext& ctx) const;
};

/// Smooth part of the bump on (-1, 1).
double bumpProfile(double u);

/// int F(v) dmu_y(xi), v^2 = |x|^2 + |y|^2 - 2<x, xi>, for a profile that
/// vanishes unless v^2 lies in (v2lo, v2hi). Each active axis is integrated
/// adaptively over the exact t-window where the profile can be nonzero.
double windowedRadial(const KernelContext& ctx, const Point& x, const Point& y,
                      const std::function<double(double)>& profileOfV2, double v2lo, double v2hi, QuadTol tol);

/// Estimate of M_{x,r}(g): int tau_{-x} F(|.|)(y) g(y) w_k(y) dy over the
/// union of the balls B(wx, r + h).
double sphericalMean(const KernelContext& ctx, const PointFn& g, const Point& x, double r, double h);

/// (1/(2 lambda d_k)) int max(t, v)^{-2 lambda} dmu_y(xi)
double greenMeanOracle(const KernelContext& ctx, const Point& x, double t, const Point& y);

struct KernelMeanResult {
  std::complex<double> lhs;
  std::complex<double> rhs;
  double residual = 0.0;
};

/// E_k(ix, y) j_lambda(t|y|) against the mollified mean of xi -> E_k(i xi, y).
/// h <= 0 selects t/50.
KernelMeanResult kernelMeanCheck(const KernelContext& ctx, const Point& x, double t, const Point& y, double h = 0.0);

struct HarmonicitySample {
  Point x;
  double t = 0.0;
};

struct HarmonicityReport {
  double maxDeviation = 0.0;
  bool consistent = false;
  std::vector<double> deviations;
};

/// max |M_{x,t}(f) - f(x)| over the samples with h = t/50.
HarmonicityReport harmonicityTest(const KernelContext& ctx, const PointFn& f, const Domain& v,
                                  const std::vector<HarmonicitySample>& samples, double tol = kMeansTol);

struct MinimumPrincipleReport {
  double boundaryMin = 0.0;
  double maxMeanExcess = 0.0;
  double interiorMin = 0.0;
  bool domainInvariant = false;
  bool boundaryOk = false;
  bool superMeanOk = false;
  /// Set only when both hypotheses hold.
  bool conclusionAsserted = false;
  bool conclusionHolds = false;
  std::string summary() const;
};

/// Checks the hypotheses of the minimum principle on a boundary mesh and a
/// grid of interior points, then min f >= -(boundaryTol + meanTol).
/// Mean radii are a quarter of the distance to the boundary (capped at maxRadius).
MinimumPrincipleReport minimumPrincipleCheck(const KernelContext& ctx, const PointFn& f, const Domain& omega,
                                             const std::vector<Point>& grid, double boundaryTol,
                                             double meanTol = kMeansTol, double maxRadius = 0.5);

}  // namespace dunklpot
