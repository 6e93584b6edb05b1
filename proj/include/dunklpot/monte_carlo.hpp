#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "dunklpot/domain.hpp"
#include "dunklpot/kernels.hpp"

namespace dunklpot {

struct McConfig {
  double step = 1e-4;        // delta
  double eps = 1e-4;         // taming floor for |<alpha, x>|
  long paths = 100000;
  std::uint64_t seed = 42;
  double rhoMax = 0.1;       // cap on delta * total jump rate per substep
  double snapTol = 1e-8;
  long maxSubsteps = 10'000'000;
  bool bridge = true;        // Brownian-bridge correction for exits between steps

  void validate() const;
};

struct ExitRecord {
  long pathId = 0;
  Point exitPoint;
  double exitTime = 0.0;
  long jumps = 0;
  bool byJump = false;
};

/// Euler scheme for the jump diffusion generated by Delta_k: increments of
/// variance 2 dt per coordinate, drift sum_R k alpha / <alpha, x>, and jumps
/// x -> sigma_alpha x at rate k |alpha|^2 / (2 <alpha, x>^2), with <alpha, x>
/// floored at eps in drift and rates. Diffusion exits are snapped to the
/// boundary; jump exits keep the landed point. x0 on a hyperplane is moved off
/// it by 2 eps. x0 outside V returns x0 at time 0.
ExitRecord simulateExit(const DunklModel& model, const Domain& v, const Point& x0, const McConfig& cfg, long pathId);

/// The same process without absorption, stopped at time t.
Point simulateFree(const DunklModel& model, const Point& x0, double t, const McConfig& cfg, long pathId);

struct McEstimate {
  double mean = 0.0;
  double stdError = 0.0;
  long n = 0;
  double ciLow() const { return mean - 1.96 * stdError; }
  double ciHigh() const { return mean + 1.96 * stdError; }
};

McEstimate summarize(const std::vector<double>& samples);

struct HarmonicMeasure {
  McEstimate estimate;
  std::vector<ExitRecord> exits;
};

/// Mean of f over N exit points, path ids firstPathId .. firstPathId + N - 1.
HarmonicMeasure harmonicMeasureEstimate(const DunklModel& model, const Domain& u, const Point& x0, const PointFn& f,
                                        const McConfig& cfg, long firstPathId = 0);

/// Fraction of exit points outside the closure of the W-saturation of U
/// (inflated by snapTol) or inside U.
double supportAudit(const std::vector<ExitRecord>& exits, const Domain& u, const DunklModel& model, double snapTol);

/// Fraction of exit points more than snapTol away from the boundary of V.
double boundaryMassFraction(const std::vector<ExitRecord>& exits, const Domain& v, double snapTol);

struct SymmetryResult {
  double hxy = 0.0;  // H_V G_y (x)
  double hyx = 0.0;  // H_V G_x (y)
  double residual = 0.0;
  double sigma = 0.0;  // combined standard error
  std::vector<ExitRecord> exitsFromX;
};

/// |H_V G_y(x) - H_V G_x(y)| with both sides from exit clouds.
SymmetryResult greenSymmetryCheck(const KernelContext& ctx, const Domain& v, const Point& x, const Point& y,
                                  const McConfig& cfg);

/// H_V f at each query point; query q uses path ids q N .. q N + N - 1.
std::vector<McEstimate> solveDirichletMc(const DunklModel& model, const Domain& v, const PointFn& boundaryData,
                                         const std::vector<Point>& queries, const McConfig& cfg);

/// Mean of f(X_t) over N free paths.
McEstimate semigroupEstimate(const DunklModel& model, const PointFn& f, const Point& x0, double t,
                             const McConfig& cfg);

/// Kolmogorov-Smirnov distance between exit angles (d = 2) and the uniform law.
double angularKsStatistic(const std::vector<ExitRecord>& exits);

/// Worker count: DUNKLPOT_THREADS when set and positive, else hardware concurrency.
unsigned workerCount();

/// Calls fn(i) for i in [0, n) on workerCount() threads; rethrows the first failure.
void parallelFor(long n, const std::function<void(long)>& fn);

}  // namespace dunklpot
