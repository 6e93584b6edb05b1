#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "dunklpot/errors.hpp"
#include "dunklpot/rational.hpp"

namespace dunklpot {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// sigma_alpha(x) = x - 2 <x,alpha> / |alpha|^2 alpha
template <typename DerivedA, typename DerivedX>
Eigen::Matrix<typename DerivedX::Scalar, Eigen::Dynamic, 1> reflect(const Eigen::MatrixBase<DerivedA>& alpha,
                                                                   const Eigen::MatrixBase<DerivedX>& x) {
  using Scalar = typename DerivedX::Scalar;
  const Scalar norm2 = alpha.squaredNorm();
  if (norm2 == Scalar(0)) throw InvalidArgument("reflect: zero root");
  const Scalar coeff = Scalar(2) * x.dot(alpha) / norm2;
  return x - coeff * alpha;
}

/// Matrix of sigma_alpha.
template <typename DerivedA>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> reflectionMatrix(
    const Eigen::MatrixBase<DerivedA>& alpha) {
  using Scalar = typename DerivedA::Scalar;
  const Scalar norm2 = alpha.squaredNorm();
  if (norm2 == Scalar(0)) throw InvalidArgument("reflectionMatrix: zero root");
  const auto n = alpha.size();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Identity(n, n);
  m -= (Scalar(2) / norm2) * alpha * alpha.transpose();
  return m;
}

/// The full root set R (closed under negation) with a multiplicity per root.
///
/// Roots are kept as given. An exact rational copy of every coordinate and
/// multiplicity is carried alongside, so symbolic code can run without
/// rounding: text input keeps its decimal value (0.8 is 4/5), double input
/// keeps its binary value.
class RootSystem {
 public:
  RootSystem(std::vector<Point> roots, std::vector<double> multiplicities);
  RootSystem(std::vector<std::vector<Rational>> roots, std::vector<Rational> multiplicities);

  /// d = 1, R = {+1, -1}.
  static RootSystem rankOne(double k);
  /// Roots +-e_i with multiplicity k[i].
  static RootSystem productZ2(const std::vector<double>& k);
  /// 2m unit roots at angles j*pi/m; generates the dihedral group of order 2m.
  static RootSystem dihedral(int m, double k);

  int dim() const { return dim_; }
  std::size_t size() const { return roots_.size(); }
  const Point& root(std::size_t i) const { return roots_[i]; }
  double multiplicity(std::size_t i) const { return k_[i]; }
  const std::vector<Rational>& exactRoot(std::size_t i) const { return exactRoots_[i]; }
  const Rational& exactMultiplicity(std::size_t i) const { return exactK_[i]; }

  /// Every root multiplied by c (multiplicities unchanged).
  RootSystem scaled(double c) const;

 private:
  void validate() const;

  int dim_ = 0;
  std::vector<Point> roots_;
  std::vector<double> k_;
  std::vector<std::vector<Rational>> exactRoots_;
  std::vector<Rational> exactK_;
};

/// A root system together with its generated reflection group and the
/// derived constants gamma = sum_R k and lambda = gamma/2 + d/2 - 1.
class DunklModel {
 public:
  static constexpr std::size_t kDefaultGroupCap = 1024;

  explicit DunklModel(RootSystem roots, std::size_t groupCap = kDefaultGroupCap);

  int dim() const { return roots_.dim(); }
  const RootSystem& roots() const { return roots_; }
  const std::vector<Matrix>& group() const { return group_; }
  double gamma() const { return gamma_; }
  const Rational& exactGamma() const { return exactGamma_; }
  double lambda() const { return lambda_; }

  /// True when every root lies on a coordinate axis (W = Z2^m acting by sign flips).
  bool isProductZ2() const { return productZ2_; }
  /// Multiplicity of the root pair on axis i (0 when the axis carries no root).
  double axisMultiplicity(int axis) const;
  /// |alpha| of the root pair on axis i (1 when the axis carries no root).
  double axisRootLength(int axis) const;

  /// Throws UnsupportedError unless isProductZ2().
  void requireProductZ2(const char* operation) const;
  /// Throws InvalidArgument unless lambda > 0 (Green-kernel quantities need it).
  void requirePositiveLambda(const char* operation) const;

 private:
  RootSystem roots_;
  std::vector<Matrix> group_;
  double gamma_ = 0.0;
  Rational exactGamma_;
  double lambda_ = 0.0;
  bool productZ2_ = false;
  std::vector<double> axisK_;
  std::vector<double> axisLength_;
};

/// Breadth-first closure of the reflections sigma_alpha, deduplicated at
/// max-entry distance 1e-10. Throws NonTerminationError past `cap` elements.
std::vector<Matrix> generateGroup(const RootSystem& roots, std::size_t cap = DunklModel::kDefaultGroupCap);

/// w_k(x) = prod_{alpha in R} |<x, alpha>|^{k(alpha)}
template <typename Derived>
double weight(const DunklModel& model, const Eigen::MatrixBase<Derived>& x) {
  double w = 1.0;
  const auto& roots = model.roots();
  for (std::size_t i = 0; i < roots.size(); ++i) {
    const double k = roots.multiplicity(i);
    if (k == 0.0) continue;
    w *= std::pow(std::abs(roots.root(i).dot(x)), k);
  }
  return w;
}

/// Distinct points of {w y : w in W}.
std::vector<Point> orbit(const DunklModel& model, const Point& y);

/// min_{w in W} |w y - x|
double orbitDistance(const DunklModel& model, const Point& x, const Point& y);

/// Flat key=value model description: `dim = 2`, `roots = 1,0; -1,0; ...`,
/// `k = 0.8, 0.8, ...`. Blank lines and `#` comments are ignored.
RootSystem parseModelConfig(const std::string& text);
DunklModel loadModel(const std::string& path);

}  // namespace dunklpot
