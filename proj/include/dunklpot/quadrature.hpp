#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace dunklpot {

/// Nodes and weights on [-1, 1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point rule for int_{-1}^{1} (1-t)^a (1+t)^b g(t) dt (Golub-Welsch).
/// Weights sum to the total mass of the weight. Rules are cached.
const GaussRule& gaussJacobi(int n, double a, double b);
inline const GaussRule& gaussLegendre(int n) { return gaussJacobi(n, 0.0, 0.0); }

/// int_{-1}^{1} (1-t)^a (1+t)^b dt
double jacobiMass(double a, double b);

struct QuadTol {
  double rel = 1e-10;
  /// Maximum number of bisections of any one panel.
  int depth = 18;
};

using Fn1 = std::function<double(double)>;

/// Globally adaptive 21-point Gauss-Kronrod over [a, b], split at every
/// breakpoint inside (a, b). Stops when the summed error estimate drops below
/// rel |I| or the panel budget (64 per piece) runs out.
double integrate(const Fn1& f, double a, double b, const std::vector<double>& breaks = {}, QuadTol tol = {});

/// Nested adaptive integration of f over the box [lo, hi], axis by axis,
/// with per-axis break points.
double integrateBox(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& hi, const std::vector<std::vector<double>>& breaks, QuadTol tol = {});

/// int_lo^hi (1-t)^a (1+t)^b g(t) dt for -1 <= lo < hi <= 1. Pieces touching
/// an endpoint are integrated after the power substitution that removes the
/// endpoint factor.
double integrateJacobiWeighted(const Fn1& g, double a, double b, double lo, double hi,
                               const std::vector<double>& breaks = {}, QuadTol tol = {});

}  // namespace dunklpot
