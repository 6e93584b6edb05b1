#include "dunklpot/operator.hpp"

#include <cmath>

#include "dunklpot/quadrature.hpp"

namespace dunklpot {

namespace {

double pairTerm(double k, const Point& alpha, const Point& x, double fx, double fsx, double directional,
                double curvature, double theta) {
  const double norm2 = alpha.squaredNorm();
  const double l = alpha.dot(x);
  if (std::abs(l) < theta * std::sqrt(norm2) * std::max(x.norm(), 1.0)) return k * curvature / norm2;
  return k * (directional / l - 0.5 * norm2 * (fx - fsx) / (l * l));
}

}  // namespace

double dunklLaplacianJet(const DunklModel& model, const JetFn& f, const Point& x, double theta) {
  const Jet jx = f(x);
  double result = jx.hessian.trace();
  const auto& roots = model.roots();
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const double k = roots.multiplicity(r);
    if (k == 0.0) continue;
    const Point& alpha = roots.root(r);
    const double l = alpha.dot(x);
    const bool nearPlane = std::abs(l) < theta * alpha.norm() * std::max(x.norm(), 1.0);
    const double fsx = nearPlane ? jx.value : f(reflect(alpha, x)).value;
    const double curvature = alpha.dot(jx.hessian * alpha);
    result += pairTerm(k, alpha, x, jx.value, fsx, jx.gradient.dot(alpha), curvature, theta);
  }
  return result;
}

double dunklLaplacianFn(const DunklModel& model, const PointFn& f, const Point& x, double h, double theta) {
  if (!(h > 0.0)) throw InvalidArgument("dunklLaplacianFn: step must be positive");
  const int d = model.dim();
  const double fx = f(x);
  double result = 0.0;
  for (int i = 0; i < d; ++i) {
    Point e = Point::Zero(d);
    e(i) = h;
    result += (f(x + e) - 2.0 * fx + f(x - e)) / (h * h);
  }
  const auto& roots = model.roots();
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const double k = roots.multiplicity(r);
    if (k == 0.0) continue;
    const Point& alpha = roots.root(r);
    const double len = alpha.norm();
    const Point step = (h / len) * alpha;
    const double fp = f(x + step);
    const double fm = f(x - step);
    const double directional = (fp - fm) / (2.0 * h) * len;
    const double curvature = (fp - 2.0 * fx + fm) / (h * h) * len * len;
    const double l = alpha.dot(x);
    const bool nearPlane = std::abs(l) < theta * len * std::max(x.norm(), 1.0);
    const double fsx = nearPlane ? fx : f(reflect(alpha, x));
    result += pairTerm(k, alpha, x, fx, fsx, directional, curvature, theta);
  }
  return result;
}

Jet polyJet(const RealPoly& p, const Point& x) {
  const int d = p.dim();
  Jet j;
  j.value = p.evaluate(x);
  j.gradient.resize(d);
  j.hessian.resize(d, d);
  for (int a = 0; a < d; ++a) {
    const RealPoly da = p.derivative(a);
    j.gradient(a) = da.evaluate(x);
    for (int b = a; b < d; ++b) {
      j.hessian(a, b) = j.hessian(b, a) = da.derivative(b).evaluate(x);
    }
  }
  return j;
}

Jet boxCutoffJet(const Point& halfWidths, const Point& x) {
  const int d = static_cast<int>(x.size());
  Jet j;
  j.value = 0.0;
  j.gradient = Point::Zero(d);
  j.hessian = Matrix::Zero(d, d);
  Eigen::VectorXd b(d), b1(d), b2(d);
  for (int i = 0; i < d; ++i) {
    const double a = halfWidths(i);
    const double s = x(i) / a;
    const double q = 1.0 - s * s;
    if (q < 2e-3) return j;  // exp(1 - 1/q) underflows
    const double v = std::exp(1.0 - 1.0 / q);
    b(i) = v;
    b1(i) = v * (-2.0 * s / (q * q)) / a;
    b2(i) = v * (4.0 * s * s / (q * q * q * q) - 2.0 / (q * q) - 8.0 * s * s / (q * q * q)) / (a * a);
  }
  j.value = b.prod();
  for (int i = 0; i < d; ++i) {
    double gi = b1(i);
    for (int m = 0; m < d; ++m) {
      if (m != i) gi *= b(m);
    }
    j.gradient(i) = gi;
    for (int l = 0; l < d; ++l) {
      double hil = 1.0;
      for (int m = 0; m < d; ++m) {
        if (i == l) {
          hil *= (m == i) ? b2(m) : b(m);
        } else {
          hil *= (m == i || m == l) ? b1(m) : b(m);
        }
      }
      j.hessian(i, l) = hil;
    }
  }
  return j;
}

double checkSymmetry(const DunklModel& model, const RationalPoly& f, const RationalPoly& phi, const Point& halfWidths,
                     int quadOrder) {
  const int d = model.dim();
  if (f.dim() != d || phi.dim() != d || halfWidths.size() != d) throw InvalidArgument("checkSymmetry: dimension mismatch");
  const RealPoly fr = f.cast<double>();
  const RealPoly lapF = dunklLaplacianPoly(model, f).cast<double>();
  const RealPoly phiR = phi.cast<double>();
  const JetFn phiTilde = [&](const Point& x) {
    const Jet p = polyJet(phiR, x);
    const Jet c = boxCutoffJet(halfWidths, x);
    Jet out;
    out.value = p.value * c.value;
    out.gradient = p.gradient * c.value + c.gradient * p.value;
    out.hessian = p.hessian * c.value + p.gradient * c.gradient.transpose() + c.gradient * p.gradient.transpose() +
                  c.hessian * p.value;
    return out;
  };

  // Per-axis rule on [-a, a]: graded toward 0, uniform over the steep flank of the cutoff.
  std::vector<std::vector<double>> nodes(static_cast<std::size_t>(d)), weights(static_cast<std::size_t>(d));
  const GaussRule& g = gaussLegendre(quadOrder);
  for (int i = 0; i < d; ++i) {
    const double a = halfWidths(i);
    std::vector<double> cuts{0.0};
    for (int j = 8; j >= 1; --j) cuts.push_back(a * std::pow(0.25, j));
    for (int j = 0; j <= 24; ++j) cuts.push_back(a * (0.25 + 0.75 * j / 24.0));
    for (double sign : {-1.0, 1.0}) {
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double lo = cuts[c];
        const double hi = cuts[c + 1];
        const double half = (hi - lo) / 2.0;
        for (Eigen::Index n = 0; n < g.nodes.size(); ++n) {
          nodes[static_cast<std::size_t>(i)].push_back(sign * (lo + half * (1.0 + g.nodes(n))));
          weights[static_cast<std::size_t>(i)].push_back(half * g.weights(n));
        }
      }
    }
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  Point x(d);
  double lhs = 0.0;
  double rhs = 0.0;
  while (true) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      x(i) = nodes[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
      w *= weights[static_cast<std::size_t>(i)][idx[static_cast<std::size_t>(i)]];
    }
    const double wk = weight(model, x);
    const Jet pt = phiTilde(x);
    lhs += w * wk * lapF.evaluate(x) * pt.value;
    rhs += w * wk * fr.evaluate(x) * dunklLaplacianJet(model, phiTilde, x);
    int axis = d - 1;
    while (axis >= 0) {
      const auto ua = static_cast<std::size_t>(axis);
      if (++idx[ua] < nodes[ua].size()) break;
      idx[ua] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return std::abs(lhs - rhs);
}

}  // namespace dunklpot
