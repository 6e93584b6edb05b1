#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dunklpot/operator.hpp"

namespace dunklpot {

/// A scalar function on R^d with the metadata quadrature needs: an optional
/// support box, per-axis break points (jumps, kinks) and an optional jet.
struct Field {
  int dim = 1;
  PointFn eval;
  JetFn jet;
  std::optional<std::pair<Point, Point>> support;
  std::vector<std::vector<double>> breaks;
  std::string description;

  double operator()(const Point& x) const { return eval(x); }
  bool hasJet() const { return static_cast<bool>(jet); }
};

Field constantField(int dim, double c);
/// 1 on the closed box [lo, hi], 0 elsewhere.
Field indicatorField(const Point& lo, const Point& hi);
/// exp(1 - 1/(1 - |x-c|^2/rho^2)) inside B(c, rho).
Field bumpField(const Point& center, double radius);
Field polyField(const RealPoly& p);
/// Piecewise-linear interpolant of f on n uniform nodes of [lo, hi] (d = 1),
/// f itself outside.
Field tabulatedField(const Field& f, double lo, double hi, int n);

/// "const:c", "indicator:a1,b1[,a2,b2...]", "bump:c1[,c2...],rho", "poly:<expr>".
Field parseField(const std::string& spec, int dim);

}  // namespace dunklpot
