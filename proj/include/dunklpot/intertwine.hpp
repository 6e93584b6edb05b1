#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "dunklpot/polynomial.hpp"
#include "dunklpot/reflection.hpp"

namespace dunklpot {

inline constexpr int kDefaultMuOrder = 40;

using PointFn = std::function<double(const Point&)>;

/// Tensor-product rule for mu_x on a Z2^d model. Per axis the factor is the
/// density prop. to (1-t)^(k-1) (1+t)^k on [-1,1] pushed through t -> x_i t.
struct MuQuadrature {
  Point basePoint;
  std::vector<Point> nodes;
  std::vector<double> weights;
  int order = 0;

  template <typename Fn>
  double integrate(Fn&& phi) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * phi(nodes[i]);
    return sum;
  }
};

MuQuadrature muQuadrature(const DunklModel& model, const Point& x, int order = kDefaultMuOrder);

/// One-axis rule in t with weights summing to 1. Breakpoints split [-1,1]
/// into panels; end panels carry the Jacobi weight of their endpoint.
/// gapPlus = 1 - t and gapMinus = 1 + t are kept separately so that nodes
/// very close to an endpoint keep their relative accuracy.
struct AxisRule {
  std::vector<double> t;
  std::vector<double> w;
  std::vector<double> gapPlus;
  std::vector<double> gapMinus;
};

/// A panel boundary, stored as (1 + t, 1 - t).
struct Cut {
  double gapMinus;
  double gapPlus;
};

AxisRule axisRule(double k, int panelOrder, const std::vector<double>& breaks = {});
AxisRule axisRuleFromCuts(double k, int panelOrder, std::vector<Cut> cuts);

/// Cuts at distance 2 ratio^j (j = 1..levels) from t = endpoint.
std::vector<Cut> gradedCuts(int endpoint, int levels, double ratio);

/// sum over the tensor rule of phi(xi), xi_i = y_i t_i. Axes with y_i = 0
/// or k_i = 0 collapse to a single node.
double integrateTensor(const DunklModel& model, const Point& y, const std::vector<AxisRule>& rules, const PointFn& phi);

struct RefineOptions {
  int plainOrder = kDefaultMuOrder;
  int panelOrder = 12;
  double relTol = 1e-7;
  double ratio = 0.25;
  std::vector<int> levels{4, 8, 16, 32, 64};
};

struct RefinedIntegral {
  double value = 0.0;
  bool converged = false;
  bool diverged = false;
  int levels = 0;
};

/// int phi dmu_y with panels graded toward t_i = corner[i] (+-1, or 0 for a
/// plain axis). Starts from the plain rule and deepens the grading until the
/// relative change drops below relTol. Divergence is declared when the
/// increments stop shrinking at the deepest levels.
RefinedIntegral integrateMuRefined(const DunklModel& model, const Point& y, const std::vector<int>& corner,
                                   const PointFn& phi, const RefineOptions& opts = {});

/// int F(v^2) dmu_y(xi) with v^2 = |x|^2 + |y|^2 - 2 sign <x, xi>, graded
/// toward the corner of the t-box where v^2 is smallest. v^2 is assembled per
/// axis from endpoint gaps, so it stays accurate next to the orbit of x.
/// v2Breaks adds panel cuts where v^2 crosses the given values (one active axis only).
RefinedIntegral integrateRadial(const DunklModel& model, const Point& x, const Point& y, int sign,
                                const std::function<double(double)>& profile, const RefineOptions& opts = {},
                                const std::vector<double>& v2Breaks = {});

/// Multiplicity of the +-e_i pair as an exact rational.
Rational exactAxisMultiplicity(const DunklModel& model, int axis);

/// E[t^n] for the rank-one factor with multiplicity k.
Rational exactMoment(const Rational& k, int n);
double moment(double k, int n);

/// V_k p (x) by quadrature.
double applyVk(const DunklModel& model, const RealPoly& p, const Point& x, int order = kDefaultMuOrder);

/// V_k restricted to homogeneous polynomials of one degree, in the monomial
/// basis. For Z2^d products it is diagonal; entries are exact.
struct VkMatrix {
  std::vector<Exponent> basis;
  std::vector<std::vector<Rational>> entries;  // entries[row][col], column = image of basis[col]
};

VkMatrix vkMatrix(const DunklModel& model, int degree);
RationalPoly applyVkExact(const DunklModel& model, const RationalPoly& p);

/// E_k(x, y) = int e^{<y, xi>} dmu_x(xi)
double dunklKernel(const DunklModel& model, const Point& x, const Point& y, int order = kDefaultMuOrder);
/// E_k(ix, y) = int e^{i<y, xi>} dmu_x(xi)
std::complex<double> dunklKernelImag(const DunklModel& model, const Point& x, const Point& y,
                                     int order = kDefaultMuOrder);

/// tau_x f(y) for f = F(|.|): int F(sqrt(|x|^2 + |y|^2 + 2<x, xi>)) dmu_y(xi)
double radialTranslate(const DunklModel& model, const std::function<double(double)>& profile, const Point& x,
                       const Point& y, int order = kDefaultMuOrder);

}  // namespace dunklpot
