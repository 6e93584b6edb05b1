#include "dunklpot/field.hpp"

#include <cmath>
#include <memory>
#include <sstream>

namespace dunklpot {

namespace {

std::vector<double> numbers(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto first = item.find_first_not_of(" \t");
    const auto last = item.find_last_not_of(" \t");
    item = first == std::string::npos ? std::string() : item.substr(first, last - first + 1);
    try {
      out.push_back(toDouble(parseRational(item)));
    } catch (const ParseError&) {
      throw ConfigError(what + ": bad number '" + item + "'");
    }
  }
  return out;
}

}  // namespace

Field constantField(int dim, double c) {
  Field f;
  f.dim = dim;
  f.eval = [c](const Point&) { return c; };
  f.jet = [c, dim](const Point&) { return Jet{c, Point::Zero(dim), Matrix::Zero(dim, dim)}; };
  f.breaks.assign(static_cast<std::size_t>(dim), {});
  std::ostringstream name;
  name << "const:" << c;
  f.description = name.str();
  return f;
}

Field indicatorField(const Point& lo, const Point& hi) {
  if (lo.size() != hi.size() || (lo.array() >= hi.array()).any()) throw InvalidArgument("indicatorField: need lo < hi");
  Field f;
  f.dim = static_cast<int>(lo.size());
  f.eval = [lo, hi](const Point& x) { return ((x.array() >= lo.array()) && (x.array() <= hi.array())).all() ? 1.0 : 0.0; };
  f.support = std::make_pair(lo, hi);
  for (int i = 0; i < f.dim; ++i) f.breaks.push_back({lo(i), hi(i)});
  std::ostringstream name;
  name << "indicator:";
  for (int i = 0; i < f.dim; ++i) name << (i ? "," : "") << lo(i) << "," << hi(i);
  f.description = name.str();
  return f;
}

Field bumpField(const Point& center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("bumpField: radius must be positive");
  Field f;
  f.dim = static_cast<int>(center.size());
  const int d = f.dim;
  const double rho2 = radius * radius;
  f.jet = [center, rho2, d](const Point& x) {
    Jet j{0.0, Point::Zero(d), Matrix::Zero(d, d)};
    const Point z = (x - center) / rho2;
    const double q = 1.0 - (x - center).squaredNorm() / rho2;
    if (q < 2e-3) return j;
    const double v = std::exp(1.0 - 1.0 / q);
    const Point g = -2.0 * z / (q * q);
    j.value = v;
    j.gradient = v * g;
    j.hessian = v * (g * g.transpose() - (2.0 / (rho2 * q * q)) * Matrix::Identity(d, d) - (8.0 / (q * q * q)) * z * z.transpose());
    return j;
  };
  f.eval = [center, rho2](const Point& x) {
    const double q = 1.0 - (x - center).squaredNorm() / rho2;
    return q < 2e-3 ? 0.0 : std::exp(1.0 - 1.0 / q);
  };
  f.support = std::make_pair(Point(center.array() - radius), Point(center.array() + radius));
  f.breaks.assign(static_cast<std::size_t>(d), {});
  for (int i = 0; i < d; ++i) f.breaks[static_cast<std::size_t>(i)] = {center(i)};
  std::ostringstream name;
  name << "bump:";
  for (int i = 0; i < d; ++i) name << center(i) << ",";
  name << radius;
  f.description = name.str();
  return f;
}

Field polyField(const RealPoly& p) {
  Field f;
  f.dim = p.dim();
  auto shared = std::make_shared<RealPoly>(p);
  f.eval = [shared](const Point& x) { return shared->evaluate(x); };
  f.jet = [shared](const Point& x) { return polyJet(*shared, x); };
  f.breaks.assign(static_cast<std::size_t>(f.dim), {});
  f.description = "poly:" + formatPoly(p);
  return f;
}

Field tabulatedField(const Field& f, double lo, double hi, int n) {
  if (f.dim != 1) throw UnsupportedError("tabulatedField: only d = 1");
  if (!(lo < hi) || n < 2) throw InvalidArgument("tabulatedField: need lo < hi and n >= 2");
  auto values = std::make_shared<std::vector<double>>(static_cast<std::size_t>(n));
  const double step = (hi - lo) / (n - 1);
  for (int i = 0; i < n; ++i) (*values)[static_cast<std::size_t>(i)] = f(Point::Constant(1, lo + step * i));
  Field out;
  out.dim = 1;
  const PointFn original = f.eval;
  out.eval = [values, lo, hi, step, n, original](const Point& x) {
    const double t = x(0);
    if (t < lo || t > hi) return original(x);
    const double pos = (t - lo) / step;
    const int i = std::min(static_cast<int>(pos), n - 2);
    const double frac = pos - i;
    return (1.0 - frac) * (*values)[static_cast<std::size_t>(i)] + frac * (*values)[static_cast<std::size_t>(i + 1)];
  };
  out.support = f.support;
  out.breaks = f.breaks;
  out.description = f.description;
  return out;
}

Field parseField(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("field '" + spec + "': expected kind:arguments");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  if (kind == "const") {
    const auto v = numbers(rest, "field const");
    if (v.size() != 1) throw ConfigError("field const: expected one value");
    return constantField(dim, v[0]);
  }
  if (kind == "indicator") {
    const auto v = numbers(rest, "field indicator");
    if (static_cast<int>(v.size()) != 2 * dim) throw ConfigError("field indicator: expected a,b per axis");
    Point lo(dim), hi(dim);
    for (int i = 0; i < dim; ++i) {
      lo(i) = v[static_cast<std::size_t>(2 * i)];
      hi(i) = v[static_cast<std::size_t>(2 * i + 1)];
    }
    try {
      return indicatorField(lo, hi);
    } catch (const InvalidArgument& e) {
      throw ConfigError(std::string("field indicator: ") + e.what());
    }
  }
  if (kind == "bump") {
    const auto v = numbers(rest, "field bump");
    if (static_cast<int>(v.size()) != dim + 1) throw ConfigError("field bump: expected center coordinates and radius");
    Point c(dim);
    for (int i = 0; i < dim; ++i) c(i) = v[static_cast<std::size_t>(i)];
    if (!(v.back() > 0.0)) throw ConfigError("field bump: radius must be positive");
    return bumpField(c, v.back());
  }
  if (kind == "poly") {
    try {
      return polyField(parsePoly(rest, dim).cast<double>());
    } catch (const ParseError& e) {
      throw ConfigError(std::string("field poly: ") + e.what());
    }
  }
  throw ConfigError("field '" + spec + "': unknown kind '" + kind + "'");
}

}  // namespace dunklpot
