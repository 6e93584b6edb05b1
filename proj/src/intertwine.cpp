#include "dunklpot/intertwine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dunklpot/quadrature.hpp"

namespace dunklpot {

namespace {

int adaptedOrder(int order, const Point& x, const Point& y) {
  const double scale = x.cwiseAbs().dot(y.cwiseAbs());
  return std::max(order, static_cast<int>(std::ceil(scale)) + 20);
}

void enumerateExponents(int dim, int degree, Exponent& current, int axis, std::vector<Exponent>& out) {
  if (axis == dim - 1) {
    current[static_cast<std::size_t>(axis)] = degree;
    out.push_back(current);
    return;
  }
  for (int p = degree; p >= 0; --p) {
    current[static_cast<std::size_t>(axis)] = p;
    enumerateExponents(dim, degree - p, current, axis + 1, out);
  }
}

}  // namespace

AxisRule axisRuleFromCuts(double k, int panelOrder, std::vector<Cut> cuts) {
  AxisRule rule;
  if (k == 0.0) {
    rule.t.push_back(1.0);
    rule.w.push_back(1.0);
    rule.gapPlus.push_back(0.0);
    rule.gapMinus.push_back(2.0);
    return rule;
  }
  const double a = k - 1.0;
  const double b = k;
  const double mass = jacobiMass(a, b);
  std::erase_if(cuts, [](const Cut& c) { return !(c.gapMinus > 0.0) || !(c.gapPlus > 0.0); });
  cuts.push_back({0.0, 2.0});
  cuts.push_back({2.0, 0.0});
  // Order by t, comparing on whichever gap is the accurate one.
  auto key = [](const Cut& c) { return c.gapMinus <= 1.0 ? std::make_pair(0, c.gapMinus) : std::make_pair(1, -c.gapPlus); };
  std::sort(cuts.begin(), cuts.end(), [&](const Cut& l, const Cut& r) { return key(l) < key(r); });
  cuts.erase(std::unique(cuts.begin(), cuts.end(), [&](const Cut& l, const Cut& r) { return key(l) == key(r); }),
             cuts.end());
  // A panel much wider than its distance to +-1 sees the endpoint factor as
  // nearly singular; grade it geometrically toward that endpoint.
  if (cuts.size() > 2) {
    std::vector<Cut> graded{cuts.front()};
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
      const Cut lo = cuts[i];
      const Cut hi = cuts[i + 1];
      std::vector<Cut> right;
      for (double d = hi.gapPlus; d > 0.0 && lo.gapPlus - d > 4.0 * d;) {
        d *= 4.0;
        right.push_back({2.0 - d, d});
      }
      const double limit = right.empty() ? hi.gapMinus : right.back().gapMinus;
      for (double d = lo.gapMinus; d > 0.0 && limit - d > 4.0 * d;) {
        d *= 4.0;
        graded.push_back({d, 2.0 - d});
      }
      graded.insert(graded.end(), right.rbegin(), right.rend());
      graded.push_back(hi);
    }
    cuts = std::move(graded);
  }

  auto push = [&](double gm, double gp, double w) {
    rule.t.push_back(gp < gm ? 1.0 - gp : gm - 1.0);
    rule.gapPlus.push_back(gp);
    rule.gapMinus.push_back(gm);
    rule.w.push_back(w / mass);
  };

  if (cuts.size() == 2) {
    const GaussRule& g = gaussJacobi(panelOrder, a, b);
    for (Eigen::Index j = 0; j < g.nodes.size(); ++j) push(1.0 + g.nodes(j), 1.0 - g.nodes(j), g.weights(j));
    return rule;
  }
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Cut& c0 = cuts[i];
    const Cut& c1 = cuts[i + 1];
    if (c1.gapPlus == 0.0) {
      const GaussRule& g = gaussJacobi(panelOrder, a, 0.0);
      const double width = c0.gapPlus;
      const double scale = std::pow(width / 2.0, a + 1.0);
      for (Eigen::Index j = 0; j < g.nodes.size(); ++j) {
        const double gp = width * (1.0 - g.nodes(j)) / 2.0;
        const double gm = c0.gapMinus + width * (1.0 + g.nodes(j)) / 2.0;
        push(gm, gp, scale * g.weights(j) * std::pow(gm, b));
      }
    } else if (c0.gapMinus == 0.0) {
      const GaussRule& g = gaussJacobi(panelOrder, 0.0, b);
      const double width = c1.gapMinus;
      const double scale = std::pow(width / 2.0, b + 1.0);
      for (Eigen::Index j = 0; j < g.nodes.size(); ++j) {
        const double gm = width * (1.0 + g.nodes(j)) / 2.0;
        const double gp = c1.gapPlus + width * (1.0 - g.nodes(j)) / 2.0;
        push(gm, gp, scale * g.weights(j) * std::pow(gp, a));
      }
    } else {
      const GaussRule& g = gaussLegendre(panelOrder);
      const double width = c0.gapPlus < 1.0 ? c0.gapPlus - c1.gapPlus : c1.gapMinus - c0.gapMinus;
      for (Eigen::Index j = 0; j < g.nodes.size(); ++j) {
        const double gm = c0.gapMinus + width * (1.0 + g.nodes(j)) / 2.0;
        const double gp = c1.gapPlus + width * (1.0 - g.nodes(j)) / 2.0;
        push(gm, gp, width / 2.0 * g.weights(j) * std::pow(gp, a) * std::pow(gm, b));
      }
    }
  }
  return rule;
}

AxisRule axisRule(double k, int panelOrder, const std::vector<double>& breaks) {
  std::vector<Cut> cuts;
  for (double t : breaks) cuts.push_back({1.0 + t, 1.0 - t});
  return axisRuleFromCuts(k, panelOrder, std::move(cuts));
}

std::vector<Cut> gradedCuts(int endpoint, int levels, double ratio) {
  std::vector<Cut> out;
  double dist = 2.0;
  for (int j = 1; j <= levels; ++j) {
    dist *= ratio;
    out.push_back(endpoint > 0 ? Cut{2.0 - dist, dist} : Cut{dist, 2.0 - dist});
  }
  return out;
}

template <typename Visit>
void tensorWalk(const DunklModel& model, const Point& y, const std::vector<AxisRule>& rules, Visit&& visit) {
  const int d = model.dim();
  if (y.size() != d || static_cast<int>(rules.size()) != d) throw InvalidArgument("tensor rule: dimension mismatch");
  std::vector<std::vector<double>> xi(static_cast<std::size_t>(d));
  std::vector<std::vector<double>> wt(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    if (y(i) == 0.0 || model.axisMultiplicity(i) == 0.0) {
      xi[ui] = {y(i)};
      wt[ui] = {1.0};
      continue;
    }
    for (std::size_t j = 0; j < rules[ui].t.size(); ++j) {
      xi[ui].push_back(y(i) * rules[ui].t[j]);
      wt[ui].push_back(rules[ui].w[j]);
    }
  }
  std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
  Point node(d);
  while (true) {
    double w = 1.0;
    for (int i = 0; i < d; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      node(i) = xi[ui][idx[ui]];
      w *= wt[ui][idx[ui]];
    }
    visit(node, w);
    int axis = d - 1;
    while (axis >= 0) {
      const auto ua = static_cast<std::size_t>(axis);
      if (++idx[ua] < xi[ua].size()) break;
      idx[ua] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
}

double integrateTensor(const DunklModel& model, const Point& y, const std::vector<AxisRule>& rules, const PointFn& phi) {
  double sum = 0.0;
  tensorWalk(model, y, rules, [&](const Point& node, double w) { sum += w * phi(node); });
  return sum;
}

MuQuadrature muQuadrature(const DunklModel& model, const Point& x, int order) {
  model.requireProductZ2("muQuadrature");
  if (order < 1) throw InvalidArgument("muQuadrature: order must be >= 1");
  if (x.size() != model.dim()) throw InvalidArgument("muQuadrature: point dimension mismatch");
  MuQuadrature q;
  q.basePoint = x;
  q.order = order;
  std::vector<AxisRule> rules;
  for (int i = 0; i < model.dim(); ++i) rules.push_back(axisRule(model.axisMultiplicity(i), order));
  tensorWalk(model, x, rules, [&](const Point& node, double w) {
    q.nodes.push_back(node);
    q.weights.push_back(w);
  });
  return q;
}

namespace {

/// Runs the plain rule then the graded levels; evaluate(level) returns the
/// integral with level = 0 meaning the plain rule.
template <typename Evaluate>
RefinedIntegral refine(const RefineOptions& opts, Evaluate&& evaluate) {
  RefinedIntegral result;
  double previous = evaluate(0);
  double lastIncrement = std::numeric_limits<double>::quiet_NaN();
  double priorIncrement = std::numeric_limits<double>::quiet_NaN();
  for (int level : opts.levels) {
    const double current = evaluate(level);
    result.levels = level;
    const double increment = std::abs(current - previous);
    priorIncrement = lastIncrement;
    lastIncrement = increment;
    previous = current;
    if (std::isfinite(current) && increment <= opts.relTol * std::abs(current)) {
      result.value = current;
      result.converged = true;
      return result;
    }
  }
  result.value = previous;
  if (!std::isfinite(previous) || (std::isfinite(priorIncrement) && lastIncrement >= 0.5 * priorIncrement)) {
    result.diverged = true;
    result.value = std::numeric_limits<double>::infinity();
  }
  return result;
}

}  // namespace

RefinedIntegral integrateMuRefined(const DunklModel& model, const Point& y, const std::vector<int>& corner,
                                   const PointFn& phi, const RefineOptions& opts) {
  model.requireProductZ2("integrateMuRefined");
  const int d = model.dim();
  if (static_cast<int>(corner.size()) != d) throw InvalidArgument("integrateMuRefined: corner size mismatch");
  std::vector<AxisRule> plain;
  for (int i = 0; i < d; ++i) plain.push_back(axisRule(model.axisMultiplicity(i), opts.plainOrder));
  return refine(opts, [&](int level) {
    if (level == 0) return integrateTensor(model, y, plain, phi);
    std::vector<AxisRule> rules;
    for (int i = 0; i < d; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      if (corner[ui] == 0) {
        rules.push_back(plain[ui]);
      } else {
        rules.push_back(axisRuleFromCuts(model.axisMultiplicity(i), opts.panelOrder,
                                         gradedCuts(corner[ui], level, opts.ratio)));
      }
    }
    return integrateTensor(model, y, rules, phi);
  });
}

RefinedIntegral integrateRadial(const DunklModel& model, const Point& x, const Point& y, int sign,
                                const std::function<double(double)>& profile, const RefineOptions& opts,
                                const std::vector<double>& v2Breaks) {
  model.requireProductZ2("integrateRadial");
  const int d = model.dim();
  if (x.size() != d || y.size() != d) throw InvalidArgument("integrateRadial: dimension mismatch");
  const double s = sign >= 0 ? 1.0 : -1.0;
  double constant = 0.0;
  std::vector<int> axes;
  std::vector<int> corner;
  std::vector<double> base, slope, k;
  for (int i = 0; i < d; ++i) {
    const double xi = x(i);
    const double yi = y(i);
    const double ki = model.axisMultiplicity(i);
    if (xi == 0.0 || yi == 0.0) {
      constant += xi * xi + yi * yi;
    } else if (ki == 0.0) {
      constant += (xi - s * yi) * (xi - s * yi);
    } else {
      axes.push_back(i);
      corner.push_back(s * xi * yi > 0.0 ? 1 : -1);
      const double diff = std::abs(xi) - std::abs(yi);
      base.push_back(diff * diff);
      slope.push_back(2.0 * std::abs(xi * yi));
      k.push_back(ki);
    }
  }
  RefinedIntegral result;
  if (axes.empty()) {
    result.value = profile(constant);
    result.converged = true;
    return result;
  }
  for (double b : base) constant += b;
  const std::size_t m = axes.size();

  std::vector<Cut> extra;
  if (m == 1) {
    for (double c : v2Breaks) {
      const double gap = (c - constant) / slope[0];
      if (gap > 0.0 && gap < 2.0) extra.push_back(corner[0] > 0 ? Cut{2.0 - gap, gap} : Cut{gap, 2.0 - gap});
    }
  }

  auto evaluateRules = [&](const std::vector<AxisRule>& rules) {
    std::vector<std::size_t> idx(m, 0);
    double sum = 0.0;
    while (true) {
      double w = 1.0;
      double v2 = constant;
      for (std::size_t j = 0; j < m; ++j) {
        const AxisRule& r = rules[j];
        w *= r.w[idx[j]];
        v2 += slope[j] * (corner[j] > 0 ? r.gapPlus[idx[j]] : r.gapMinus[idx[j]]);
      }
      sum += w * profile(v2);
      std::size_t axis = m;
      while (axis > 0) {
        --axis;
        if (++idx[axis] < rules[axis].t.size()) break;
        idx[axis] = 0;
        if (axis == 0) return sum;
      }
    }
  };

  std::vector<AxisRule> plain;
  for (std::size_t j = 0; j < m; ++j) plain.push_back(axisRule(k[j], opts.plainOrder));
  return refine(opts, [&](int level) {
    if (level == 0) return evaluateRules(plain);
    std::vector<AxisRule> rules;
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<Cut> cuts = gradedCuts(corner[j], level, opts.ratio);
      cuts.insert(cuts.end(), extra.begin(), extra.end());
      rules.push_back(axisRuleFromCuts(k[j], opts.panelOrder, std::move(cuts)));
    }
    return evaluateRules(rules);
  });
}

Rational exactAxisMultiplicity(const DunklModel& model, int axis) {
  const auto& roots = model.roots();
  for (std::size_t r = 0; r < roots.size(); ++r) {
    const auto& alpha = roots.exactRoot(r);
    bool onAxis = alpha[static_cast<std::size_t>(axis)] != 0;
    for (std::size_t j = 0; j < alpha.size() && onAxis; ++j) {
      if (static_cast<int>(j) != axis && alpha[j] != 0) onAxis = false;
    }
    if (onAxis) return roots.exactMultiplicity(r);
  }
  return Rational(0);
}

Rational exactMoment(const Rational& k, int n) {
  // t = 2u - 1 with u ~ Beta(k+1, k)
  Rational sum(0);
  Rational uMoment(1);
  mpz_class binom(1);
  for (int j = 0; j <= n; ++j) {
    if (j > 0) {
      uMoment *= (k + 1 + (j - 1)) / (2 * k + 1 + (j - 1));
      binom = binom * (n - j + 1) / j;
    }
    Rational term = Rational(binom) * uMoment;
    mpz_class pow2 = mpz_class(1) << j;
    term *= Rational(pow2);
    if ((n - j) % 2 == 1) term = -term;
    sum += term;
  }
  sum.canonicalize();
  return sum;
}

double moment(double k, int n) {
  double sum = 0.0;
  double uMoment = 1.0;
  double binom = 1.0;
  for (int j = 0; j <= n; ++j) {
    if (j > 0) {
      uMoment *= (k + j) / (2.0 * k + j);
      binom = binom * (n - j + 1) / j;
    }
    const double term = binom * uMoment * std::ldexp(1.0, j);
    sum += ((n - j) % 2 == 1) ? -term : term;
  }
  return sum;
}

double applyVk(const DunklModel& model, const RealPoly& p, const Point& x, int order) {
  const int need = std::max(p.degree(), 0) / 2 + 1;
  const MuQuadrature q = muQuadrature(model, x, std::max(order, need));
  return q.integrate([&](const Point& xi) { return p.evaluate(xi); });
}

VkMatrix vkMatrix(const DunklModel& model, int degree) {
  model.requireProductZ2("vkMatrix");
  if (degree < 0) throw InvalidArgument("vkMatrix: degree must be >= 0");
  VkMatrix m;
  Exponent current(static_cast<std::size_t>(model.dim()), 0);
  enumerateExponents(model.dim(), degree, current, 0, m.basis);
  const std::size_t n = m.basis.size();
  m.entries.assign(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t c = 0; c < n; ++c) {
    Rational value(1);
    for (int i = 0; i < model.dim(); ++i) value *= exactMoment(exactAxisMultiplicity(model, i), m.basis[c][static_cast<std::size_t>(i)]);
    m.entries[c][c] = value;
  }
  return m;
}

RationalPoly applyVkExact(const DunklModel& model, const RationalPoly& p) {
  model.requireProductZ2("applyVkExact");
  std::vector<Rational> axisK;
  for (int i = 0; i < model.dim(); ++i) axisK.push_back(exactAxisMultiplicity(model, i));
  RationalPoly out(p.dim());
  for (const auto& [e, c] : p.terms()) {
    Rational factor = c;
    for (int i = 0; i < p.dim(); ++i) factor *= exactMoment(axisK[static_cast<std::size_t>(i)], e[static_cast<std::size_t>(i)]);
    out.addTerm(e, factor);
  }
  return out;
}

double dunklKernel(const DunklModel& model, const Point& x, const Point& y, int order) {
  const MuQuadrature q = muQuadrature(model, x, adaptedOrder(order, x, y));
  return q.integrate([&](const Point& xi) { return std::exp(y.dot(xi)); });
}

std::complex<double> dunklKernelImag(const DunklModel& model, const Point& x, const Point& y, int order) {
  const MuQuadrature q = muQuadrature(model, x, adaptedOrder(order, x, y));
  const double re = q.integrate([&](const Point& xi) { return std::cos(y.dot(xi)); });
  const double im = q.integrate([&](const Point& xi) { return std::sin(y.dot(xi)); });
  return {re, im};
}

double radialTranslate(const DunklModel& model, const std::function<double(double)>& profile, const Point& x,
                       const Point& y, int order) {
  const double base = x.squaredNorm() + y.squaredNorm();
  const MuQuadrature q = muQuadrature(model, y, order);
  return q.integrate([&](const Point& xi) { return profile(std::sqrt(std::max(0.0, base + 2.0 * x.dot(xi)))); });
}

}  // namespace dunklpot
