#pragma once

#include <vector>

#include "dunklpot/field.hpp"
#include "dunklpot/intertwine.hpp"
#include "dunklpot/quadrature.hpp"
#include "dunklpot/reflection.hpp"

namespace dunklpot {

/// Normalized Bessel function j_lambda(z) = Gamma(lambda+1) sum_n (-1)^n (z/2)^{2n} / (n! Gamma(n+lambda+1)).
double besselJ(double lambda, double z);

/// d_k = int over the unit sphere of w_k (d <= 3). Gauss-Jacobi on the arcs
/// between hyperplane angles in d = 2; nested adaptive quadrature in d = 3.
double surfaceConstant(const DunklModel& model, int order = 32);

struct KernelPolicy {
  int muOrder = kDefaultMuOrder;
  double truncationCutoff = 1e-14;
  double maxRadius = 1e6;
  QuadTol quad{1e-10, 18};
  RefineOptions green{};
  RefineOptions heat{kDefaultMuOrder, 12, 1e-11, 0.25, {4, 8, 16, 32}};
};

/// A model with its surface constant and quadrature policy.
class KernelContext {
 public:
  explicit KernelContext(DunklModel model, KernelPolicy policy = {});

  const DunklModel& model() const { return model_; }
  double dk() const { return dk_; }
  double lambda() const { return model_.lambda(); }
  const KernelPolicy& policy() const { return policy_; }
  /// Rank-one factor of axis i (product models only; empty otherwise).
  const std::vector<DunklModel>& axisModels() const { return axisModels_; }

 private:
  DunklModel model_;
  double dk_;
  KernelPolicy policy_;
  std::vector<DunklModel> axisModels_;
};

/// Radial profile Q_t(s) = 2 exp(-s^2/4t) / (d_k (4t)^{lambda+1} Gamma(lambda+1)).
double heatProfile(const KernelContext& ctx, double t, double s);

/// p_t(x, y) = int Q_t(sqrt(|x|^2 + |y|^2 - 2<x, xi>)) dmu_y(xi), computed as a
/// product of one-axis integrals since the Gaussian factorizes.
double heatKernel(const KernelContext& ctx, double t, const Point& x, const Point& y);

/// Q_t(|x| - |y|), the pointwise upper bound of p_t(x, y).
double heatKernelBound(const KernelContext& ctx, double t, const Point& x, const Point& y);

/// Radius past which the heat-kernel bound times the weight growth falls below the cutoff.
double truncationRadius(const KernelContext& ctx, double t, const Point& x);

/// P_t f(x) = int p_t(x, y) f(y) w_k(y) dy
double semigroupApply(const KernelContext& ctx, double t, const Field& f, const Point& x);

/// G(x, y) = (1/(2 d_k lambda)) int (|x|^2 + |y|^2 - 2<x, xi>)^{-lambda} dmu_y(xi).
/// +infinity when the graded refinement diverges.
double greenFunction(const KernelContext& ctx, const Point& x, const Point& y);
RefinedIntegral greenFunctionDetailed(const KernelContext& ctx, const Point& x, const Point& y);

/// (1/(2 d_k lambda)) min_w |w y - x|^{-2 lambda}
double greenBound(const KernelContext& ctx, const Point& x, const Point& y);

/// G f(x) = int G(x, y) f(y) w_k(y) dy over the support box of f.
double greenApply(const KernelContext& ctx, const Field& f, const Point& x);

/// sup|f| (r + |x|)^2 / (4 lambda) with r the radius of the support box.
double greenApplyBound(const KernelContext& ctx, const Field& f, double supNorm, const Point& x);

/// P_t (G f)(x)
double semigroupOfPotential(const KernelContext& ctx, double t, const Field& f, const Point& x);

/// max over the grid of P_t G f(x) - G f(x).
double excessivityCheck(const KernelContext& ctx, const Field& f, const std::vector<double>& tGrid,
                        const std::vector<Point>& xGrid);

/// G f(x) - int_0^t P_s f(x) ds - P_t G f(x)
double greenDecompositionResidual(const KernelContext& ctx, const Field& f, double t, const Point& x);

/// G f sampled on a grid and linearly interpolated (d = 1); exact G f outside [lo, hi].
Field greenPotentialField(const KernelContext& ctx, const Field& f, double lo, double hi, int n);

}  // namespace dunklpot
