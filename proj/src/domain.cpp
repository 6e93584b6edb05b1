#include "dunklpot/domain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace dunklpot {

namespace {

std::vector<double> parseNumberList(const std::string& text) {
  std::vector<double> values;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("domain: bad number '" + item + "'");
    }
  }
  return values;
}

std::vector<std::pair<double, double>> mergePieces(std::vector<std::pair<double, double>> pieces) {
  std::sort(pieces.begin(), pieces.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& p : pieces) {
    if (!merged.empty() && p.first < merged.back().second) {
      merged.back().second = std::max(merged.back().second, p.second);
    } else {
      merged.push_back(p);
    }
  }
  return merged;
}

}  // namespace

Domain Domain::ball(int dim, double radius) {
  if (dim < 1 || !(radius > 0.0)) throw InvalidArgument("Domain::ball: need dim >= 1 and radius > 0");
  Domain d;
  d.kind_ = Kind::Ball;
  d.dim_ = dim;
  d.r2_ = radius;
  return d;
}

Domain Domain::box(const Eigen::VectorXd& halfWidths) {
  if (halfWidths.size() < 1 || (halfWidths.array() <= 0.0).any()) {
    throw InvalidArgument("Domain::box: half-widths must be positive");
  }
  Domain d;
  d.kind_ = Kind::Box;
  d.dim_ = static_cast<int>(halfWidths.size());
  d.half_ = halfWidths;
  return d;
}

Domain Domain::annulus(int dim, double inner, double outer) {
  if (dim < 1 || !(inner > 0.0) || !(outer > inner)) throw InvalidArgument("Domain::annulus: need 0 < r1 < r2");
  Domain d;
  d.kind_ = Kind::Annulus;
  d.dim_ = dim;
  d.r1_ = inner;
  d.r2_ = outer;
  return d;
}

Domain Domain::intervals(std::vector<std::pair<double, double>> pieces) {
  if (pieces.empty()) throw InvalidArgument("Domain::intervals: no intervals");
  for (const auto& [a, b] : pieces) {
    if (!(a < b)) throw InvalidArgument("Domain::intervals: each interval needs a < b");
  }
  Domain d;
  d.kind_ = Kind::IntervalUnion;
  d.dim_ = 1;
  d.pieces_ = mergePieces(std::move(pieces));
  return d;
}

Domain Domain::parse(const std::string& spec, int dim) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ConfigError("domain '" + spec + "': expected kind:values");
  const std::string kind = spec.substr(0, colon);
  const std::string rest = spec.substr(colon + 1);
  try {
    if (kind == "ball") {
      const auto v = parseNumberList(rest);
      if (v.size() != 1) throw ConfigError("domain ball: expected one radius");
      return ball(dim, v[0]);
    }
    if (kind == "box") {
      auto v = parseNumberList(rest);
      if (v.size() == 1 && dim > 1) v.assign(static_cast<std::size_t>(dim), v[0]);
      if (static_cast<int>(v.size()) != dim) throw ConfigError("domain box: expected one half-width per axis");
      return box(Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
    }
    if (kind == "annulus") {
      const auto v = parseNumberList(rest);
      if (v.size() != 2) throw ConfigError("domain annulus: expected r1,r2");
      return annulus(dim, v[0], v[1]);
    }
    if (kind == "interval" || kind == "intervals") {
      if (dim != 1) throw ConfigError("domain intervals: only in dimension 1");
      std::vector<std::pair<double, double>> pieces;
      std::string item;
      std::istringstream in(rest);
      while (std::getline(in, item, ';')) {
        const auto v = parseNumberList(item);
        if (v.size() != 2) throw ConfigError("domain interval: expected a,b");
        pieces.emplace_back(v[0], v[1]);
      }
      return intervals(std::move(pieces));
    }
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("domain '") + spec + "': " + e.what());
  }
  throw ConfigError("domain '" + spec + "': unknown kind '" + kind + "'");
}

std::string Domain::describe() const {
  std::ostringstream out;
  out.precision(17);
  switch (kind_) {
    case Kind::Ball:
      out << "ball:" << r2_;
      break;
    case Kind::Annulus:
      out << "annulus:" << r1_ << "," << r2_;
      break;
    case Kind::Box:
      out << "box:";
      for (int i = 0; i < dim_; ++i) out << (i ? "," : "") << half_(i);
      break;
    case Kind::IntervalUnion:
      out << "intervals:";
      for (std::size_t i = 0; i < pieces_.size(); ++i) out << (i ? ";" : "") << pieces_[i].first << "," << pieces_[i].second;
      break;
  }
  return out.str();
}

bool Domain::contains(const Point& x) const { return distToBoundary(x) > 0.0; }

double Domain::distToBoundary(const Point& x) const {
  if (x.size() != dim_) throw InvalidArgument("Domain: point dimension mismatch");
  switch (kind_) {
    case Kind::Ball:
      return r2_ - x.norm();
    case Kind::Annulus: {
      const double r = x.norm();
      return std::min(r - r1_, r2_ - r);
    }
    case Kind::Box: {
      const Eigen::ArrayXd excess = x.array().abs() - half_.array();
      if ((excess < 0.0).all()) return -excess.maxCoeff();
      return -excess.max(0.0).matrix().norm();
    }
    case Kind::IntervalUnion: {
      const double t = x(0);
      double outside = std::numeric_limits<double>::infinity();
      for (const auto& [a, b] : pieces_) {
        if (t > a && t < b) return std::min(t - a, b - t);
        outside = std::min(outside, t <= a ? a - t : t - b);
      }
      return -outside;
    }
  }
  return 0.0;
}

Point Domain::projectToBoundary(const Point& x) const {
  if (x.size() != dim_) throw InvalidArgument("Domain: point dimension mismatch");
  switch (kind_) {
    case Kind::Ball: {
      const double r = x.norm();
      if (r == 0.0) return r2_ * Point::Unit(dim_, 0);
      return (r2_ / r) * x;
    }
    case Kind::Annulus: {
      const double r = x.norm();
      const Point dir = r == 0.0 ? Point(Point::Unit(dim_, 0)) : Point(x / r);
      return (std::abs(r - r1_) <= std::abs(r - r2_) ? r1_ : r2_) * dir;
    }
    case Kind::Box: {
      if (distToBoundary(x) > 0.0) {
        Eigen::Index axis = 0;
        (half_.array() - x.array().abs()).minCoeff(&axis);
        Point p = x;
        p(axis) = x(axis) < 0.0 ? -half_(axis) : half_(axis);
        return p;
      }
      return x.cwiseMax(-half_).cwiseMin(half_);
    }
    case Kind::IntervalUnion: {
      const double t = x(0);
      double best = pieces_.front().first;
      for (const auto& [a, b] : pieces_) {
        if (std::abs(t - a) < std::abs(t - best)) best = a;
        if (std::abs(t - b) < std::abs(t - best)) best = b;
      }
      return Point::Constant(1, best);
    }
  }
  return x;
}

Domain Domain::shrunk(double margin) const {
  if (!(margin >= 0.0)) throw InvalidArgument("Domain::shrunk: margin must be >= 0");
  switch (kind_) {
    case Kind::Ball:
      return ball(dim_, r2_ - margin);
    case Kind::Annulus:
      return annulus(dim_, r1_ + margin, r2_ - margin);
    case Kind::Box:
      return box(half_.array() - margin);
    case Kind::IntervalUnion: {
      std::vector<std::pair<double, double>> pieces;
      for (const auto& [a, b] : pieces_) {
        if (a + margin < b - margin) pieces.emplace_back(a + margin, b - margin);
      }
      return intervals(std::move(pieces));
    }
  }
  return *this;
}

std::pair<Point, Point> Domain::boundingBox() const {
  switch (kind_) {
    case Kind::Ball:
    case Kind::Annulus:
      return {Point::Constant(dim_, -r2_), Point::Constant(dim_, r2_)};
    case Kind::Box:
      return {-half_, half_};
    case Kind::IntervalUnion:
      return {Point::Constant(1, pieces_.front().first), Point::Constant(1, pieces_.back().second)};
  }
  return {};
}

bool Domain::isWInvariant(const DunklModel& model, int samples) const {
  if (model.dim() != dim_) throw InvalidArgument("Domain::isWInvariant: dimension mismatch");
  auto [lo, hi] = boundingBox();
  const double reach = std::max(lo.cwiseAbs().maxCoeff(), hi.cwiseAbs().maxCoeff()) * 1.1;
  std::mt19937_64 rng(0x5eedULL);
  std::uniform_real_distribution<double> coord(-reach, reach);
  std::vector<Point> probes;
  for (int s = 0; s < samples; ++s) {
    Point x(dim_);
    for (int i = 0; i < dim_; ++i) x(i) = coord(rng);
    probes.push_back(std::move(x));
  }
  for (const auto& b : boundaryMesh(16)) {
    probes.push_back(0.999 * b);
    probes.push_back(1.001 * b);
  }
  for (const auto& x : probes) {
    const double dx = distToBoundary(x);
    if (std::abs(dx) < 1e-9) continue;
    for (const auto& w : model.group()) {
      const Point wx = w * x;
      const double dwx = distToBoundary(wx);
      if (std::abs(dwx) < 1e-9) continue;
      if ((dx > 0.0) != (dwx > 0.0)) return false;
    }
  }
  return true;
}

std::vector<Point> Domain::boundaryMesh(int perComponent) const {
  std::vector<Point> mesh;
  const int n = std::max(perComponent, 1);
  auto sphere = [&](double radius) {
    if (dim_ == 1) {
      mesh.push_back(Point::Constant(1, -radius));
      mesh.push_back(Point::Constant(1, radius));
    } else if (dim_ == 2) {
      for (int j = 0; j < n; ++j) {
        const double a = 2.0 * std::numbers::pi * (j + 0.5) / n;
        Point p(2);
        p << radius * std::cos(a), radius * std::sin(a);
        mesh.push_back(p);
      }
    } else {
      // Fibonacci points on the first three axes, remaining coordinates zero.
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int j = 0; j < n; ++j) {
        const double z = 1.0 - 2.0 * (j + 0.5) / n;
        const double rho = std::sqrt(1.0 - z * z);
        Point p = Point::Zero(dim_);
        p(0) = radius * rho * std::cos(golden * j);
        p(1) = radius * rho * std::sin(golden * j);
        p(2) = radius * z;
        mesh.push_back(p);
      }
    }
  };
  switch (kind_) {
    case Kind::Ball:
      sphere(r2_);
      break;
    case Kind::Annulus:
      sphere(r1_);
      sphere(r2_);
      break;
    case Kind::Box:
      for (int axis = 0; axis < dim_; ++axis) {
        for (double side : {-1.0, 1.0}) {
          for (int j = 0; j < (dim_ == 1 ? 1 : n); ++j) {
            Point p = Point::Zero(dim_);
            for (int other = 0; other < dim_; ++other) {
              if (other == axis) continue;
              const double u = -1.0 + 2.0 * (j + 0.5) / n;
              p(other) = u * half_(other);
            }
            p(axis) = side * half_(axis);
            mesh.push_back(p);
          }
        }
      }
      break;
    case Kind::IntervalUnion:
      for (const auto& [a, b] : pieces_) {
        mesh.push_back(Point::Constant(1, a));
        mesh.push_back(Point::Constant(1, b));
      }
      break;
  }
  return mesh;
}

Domain wSaturate(const DunklModel& model, const Domain& domain) {
  if (domain.isWInvariant(model)) return domain;
  if (domain.kind() == Domain::Kind::IntervalUnion) {
    std::vector<std::pair<double, double>> pieces = domain.pieces();
    for (const auto& [a, b] : domain.pieces()) pieces.emplace_back(-b, -a);
    return Domain::intervals(std::move(pieces));
  }
  throw UnsupportedError("wSaturate: saturation of a " + domain.describe() + " domain is not representable");
}

}  // namespace dunklpot
