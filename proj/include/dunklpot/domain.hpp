#pragma once

#include <string>
#include <utility>
#include <vector>

#include "dunklpot/reflection.hpp"

namespace dunklpot {

/// Open region: a ball or annulus centred at 0, a box with symmetric
/// half-widths, or (d = 1) a finite union of open intervals.
class Domain {
 public:
  enum class Kind { Ball, Box, Annulus, IntervalUnion };

  static Domain ball(int dim, double radius);
  static Domain box(const Eigen::VectorXd& halfWidths);
  static Domain annulus(int dim, double inner, double outer);
  static Domain intervals(std::vector<std::pair<double, double>> pieces);

  /// "ball:R", "box:a1,a2,...", "annulus:r1,r2", "interval:a,b",
  /// "intervals:a,b;c,d". Ball and annulus take their dimension from `dim`.
  static Domain parse(const std::string& spec, int dim);

  Kind kind() const { return kind_; }
  int dim() const { return dim_; }
  std::string describe() const;

  bool contains(const Point& x) const;
  /// Signed distance to the boundary: > 0 exactly on the open set.
  double distToBoundary(const Point& x) const;
  /// Nearest boundary point.
  Point projectToBoundary(const Point& x) const;

  /// {z : B(z, margin) inside the domain}, of the same kind.
  Domain shrunk(double margin) const;

  /// Axis-aligned bounding box as (lower, upper) corners.
  std::pair<Point, Point> boundingBox() const;

  /// Sampled check that w(V) = V for every group element.
  bool isWInvariant(const DunklModel& model, int samples = 2000) const;

  /// Deterministic boundary points (both interval ends / circle angles / box faces).
  std::vector<Point> boundaryMesh(int perComponent) const;

  const std::vector<std::pair<double, double>>& pieces() const { return pieces_; }

 private:
  Domain() = default;

  Kind kind_ = Kind::Ball;
  int dim_ = 1;
  double r1_ = 0.0;
  double r2_ = 0.0;
  Eigen::VectorXd half_;
  std::vector<std::pair<double, double>> pieces_;
};

/// Smallest W-invariant set containing U: union of w(U). Supported for
/// interval unions in d = 1 and for domains already invariant under sign flips.
Domain wSaturate(const DunklModel& model, const Domain& domain);

}  // namespace dunklpot
