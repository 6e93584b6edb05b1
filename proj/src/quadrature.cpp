#include "dunklpot/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <queue>
#include <tuple>

#include "dunklpot/errors.hpp"

namespace dunklpot {

namespace {

GaussRule golubWelsch(int n, double a, double b) {
  Eigen::VectorXd diag(n);
  Eigen::VectorXd off(std::max(n - 1, 0));
  const double ab = a + b;
  for (int i = 0; i < n; ++i) {
    if (i == 0) {
      diag(i) = (b - a) / (ab + 2.0);
    } else {
      const double s = 2.0 * i + ab;
      diag(i) = (b * b - a * a) / (s * (s + 2.0));
    }
  }
  for (int i = 1; i < n; ++i) {
    const double s = 2.0 * i + ab;
    double beta = 4.0 * i * (i + a) * (i + b) * (i + ab) / (s * s * (s + 1.0) * (s - 1.0));
    if (i == 1 && std::abs(ab + 1.0) < 1e-14) beta = 4.0 * (1.0 + a) * (1.0 + b) / ((2.0 + ab) * (2.0 + ab) * (3.0 + ab));
    off(i - 1) = std::sqrt(beta);
  }
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  jacobi.diagonal() = diag;
  if (n > 1) {
    jacobi.diagonal(1) = off;
    jacobi.diagonal(-1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  if (eig.info() != Eigen::Success) throw ToleranceError("gaussJacobi: eigen-decomposition failed");
  GaussRule rule;
  rule.nodes = eig.eigenvalues();
  rule.weights = jacobiMass(a, b) * eig.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace

double jacobiMass(double a, double b) {
  return std::exp((a + b + 1.0) * std::log(2.0) + std::lgamma(a + 1.0) + std::lgamma(b + 1.0) - std::lgamma(a + b + 2.0));
}

const GaussRule& gaussJacobi(int n, double a, double b) {
  if (n < 1) throw InvalidArgument("gaussJacobi: n must be >= 1");
  if (!(a > -1.0) || !(b > -1.0)) throw InvalidArgument("gaussJacobi: exponents must exceed -1");
  static std::mutex mutex;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto& slot = cache[{n, a, b}];
  if (!slot) slot = std::make_unique<GaussRule>(golubWelsch(n, a, b));
  return *slot;
}

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 21>;
using Gauss = boost::math::quadrature::gauss<double, 10>;

struct Panel {
  double a, b, value, error;
  int depth;
  bool operator<(const Panel& o) const { return error < o.error; }
};

// Gauss weights placed on the matching Kronrod abscissae.
const std::vector<double>& embeddedGaussWeights() {
  static const std::vector<double> weights = [] {
    const auto& xk = Kronrod::abscissa();
    std::vector<double> w(xk.size(), 0.0);
    const auto& xg = Gauss::abscissa();
    const auto& wg = Gauss::weights();
    for (std::size_t j = 0; j < xg.size(); ++j) {
      std::size_t best = 0;
      for (std::size_t i = 1; i < xk.size(); ++i) {
        if (std::abs(xk[i] - xg[j]) < std::abs(xk[best] - xg[j])) best = i;
      }
      w[best] = wg[j];
    }
    return w;
  }();
  return weights;
}

Panel evaluatePanel(const Fn1& f, double a, double b, int depth) {
  const auto& xk = Kronrod::abscissa();
  const auto& wk = Kronrod::weights();
  const auto& wg = embeddedGaussWeights();
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double kron = 0.0;
  double gauss = 0.0;
  for (std::size_t i = 0; i < xk.size(); ++i) {
    double fx = f(mid + half * xk[i]);
    if (xk[i] != 0.0) {
      const double fy = f(mid - half * xk[i]);
      kron += wk[i] * (fx + fy);
      gauss += wg[i] * (fx + fy);
    } else {
      kron += wk[i] * fx;
      gauss += wg[i] * fx;
    }
  }
  return {a, b, half * kron, std::abs(half * (kron - gauss)), depth};
}

}  // namespace

double integrate(const Fn1& f, double a, double b, const std::vector<double>& breaks, QuadTol tol) {
  if (!(a < b)) return 0.0;
  std::vector<double> cuts{a};
  for (double c : breaks) {
    if (c > a && c < b) cuts.push_back(c);
  }
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  // Globally adaptive: always bisect the panel with the largest error estimate.
  std::priority_queue<Panel> heap;
  double value = 0.0;
  double error = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = evaluatePanel(f, cuts[i], cuts[i + 1], 0);
    value += p.value;
    error += p.error;
    heap.push(p);
  }
  std::vector<Panel> settled;
  const std::size_t budget = 64 * cuts.size() + 200;
  std::size_t panels = heap.size();
  while (!heap.empty() && error > tol.rel * std::abs(value) && panels < budget) {
    Panel p = heap.top();
    heap.pop();
    if (p.depth >= tol.depth || !std::isfinite(p.error)) {
      settled.push_back(p);
      continue;
    }
    const double mid = 0.5 * (p.a + p.b);
    const Panel left = evaluatePanel(f, p.a, mid, p.depth + 1);
    const Panel right = evaluatePanel(f, mid, p.b, p.depth + 1);
    value += left.value + right.value - p.value;
    error += left.error + right.error - p.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  // Re-sum to shed the drift of the running totals.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  for (const Panel& p : settled) sum += p.value;
  return sum;
}

double integrateBox(const std::function<double(const Eigen::VectorXd&)>& f, const Eigen::VectorXd& lo,
                    const Eigen::VectorXd& hi, const std::vector<std::vector<double>>& breaks, QuadTol tol) {
  const auto d = lo.size();
  if (hi.size() != d || static_cast<Eigen::Index>(breaks.size()) != d) throw InvalidArgument("integrateBox: dimension mismatch");
  Eigen::VectorXd point(d);
  std::function<double(Eigen::Index)> level = [&](Eigen::Index axis) -> double {
    auto inner = [&](double v) {
      point(axis) = v;
      return axis + 1 == d ? f(point) : level(axis + 1);
    };
    return integrate(inner, lo(axis), hi(axis), breaks[static_cast<std::size_t>(axis)], tol);
  };
  return level(0);
}

double integrateJacobiWeighted(const Fn1& g, double a, double b, double lo, double hi, const std::vector<double>& breaks,
                               QuadTol tol) {
  lo = std::max(lo, -1.0);
  hi = std::min(hi, 1.0);
  if (!(lo < hi)) return 0.0;
  std::vector<double> cuts{lo};
  for (double c : breaks) {
    if (c > lo && c < hi) cuts.push_back(c);
  }
  if (lo < 0.0 && hi > 0.0) cuts.push_back(0.0);
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double p = cuts[i];
    const double q = cuts[i + 1];
    if (q == 1.0) {
      // (1-t) = w^m, m = 1/(a+1)
      const double m = 1.0 / (a + 1.0);
      const double top = std::pow(1.0 - p, a + 1.0);
      auto h = [&](double w) {
        const double t = 1.0 - std::pow(w, m);
        return m * std::pow(1.0 + t, b) * g(t);
      };
      sum += integrate(h, 0.0, top, {}, tol);
    } else if (p == -1.0) {
      const double m = 1.0 / (b + 1.0);
      const double top = std::pow(1.0 + q, b + 1.0);
      auto h = [&](double w) {
        const double t = -1.0 + std::pow(w, m);
        return m * std::pow(1.0 - t, a) * g(t);
      };
      sum += integrate(h, 0.0, top, {}, tol);
    } else {
      auto h = [&](double t) { return std::pow(1.0 - t, a) * std::pow(1.0 + t, b) * g(t); };
      sum += integrate(h, p, q, {}, tol);
    }
  }
  return sum;
}

}  // namespace dunklpot
