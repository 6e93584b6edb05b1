#include "dunklpot/reflection.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <numbers>
#include <sstream>

namespace dunklpot {

namespace {

constexpr double kGroupTol = 1e-10;
constexpr double kRootTol = 1e-10;

bool sameMatrix(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff() < kGroupTol; }

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

}  // namespace

RootSystem::RootSystem(std::vector<Point> roots, std::vector<double> multiplicities)
    : roots_(std::move(roots)), k_(std::move(multiplicities)) {
  if (roots_.empty()) throw InvalidArgument("RootSystem: no roots");
  if (roots_.size() != k_.size()) throw InvalidArgument("RootSystem: one multiplicity per root required");
  dim_ = static_cast<int>(roots_.front().size());
  for (const auto& r : roots_) {
    if (r.size() != dim_) throw InvalidArgument("RootSystem: roots of mixed dimension");
    std::vector<Rational> exact(static_cast<std::size_t>(dim_));
    for (int j = 0; j < dim_; ++j) exact[static_cast<std::size_t>(j)] = rationalFromDouble(r(j));
    exactRoots_.push_back(std::move(exact));
  }
  for (double k : k_) exactK_.push_back(rationalFromDouble(k));
  validate();
}

RootSystem::RootSystem(std::vector<std::vector<Rational>> roots, std::vector<Rational> multiplicities)
    : exactRoots_(std::move(roots)), exactK_(std::move(multiplicities)) {
  if (exactRoots_.empty()) throw InvalidArgument("RootSystem: no roots");
  if (exactRoots_.size() != exactK_.size()) throw InvalidArgument("RootSystem: one multiplicity per root required");
  dim_ = static_cast<int>(exactRoots_.front().size());
  for (const auto& r : exactRoots_) {
    if (static_cast<int>(r.size()) != dim_) throw InvalidArgument("RootSystem: roots of mixed dimension");
    Point p(dim_);
    for (int j = 0; j < dim_; ++j) p(j) = r[static_cast<std::size_t>(j)].get_d();
    roots_.push_back(std::move(p));
  }
  for (const auto& k : exactK_) k_.push_back(k.get_d());
  validate();
}

void RootSystem::validate() const {
  if (dim_ < 1) throw InvalidArgument("RootSystem: dimension must be >= 1");
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    if (!roots_[i].allFinite() || roots_[i].squaredNorm() == 0.0) throw InvalidArgument("RootSystem: zero or non-finite root");
    if (!(k_[i] >= 0.0) || !std::isfinite(k_[i])) throw InvalidArgument("RootSystem: multiplicities must be finite and >= 0");
  }
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    bool hasNegative = false;
    for (std::size_t j = 0; j < roots_.size(); ++j) {
      if (i == j) continue;
      const Point& a = roots_[i];
      const Point& b = roots_[j];
      const double cross = a.squaredNorm() * b.squaredNorm() - a.dot(b) * a.dot(b);
      const bool parallel = std::abs(cross) <= kRootTol * a.squaredNorm() * b.squaredNorm();
      if (!parallel) continue;
      if ((a + b).norm() <= kRootTol * a.norm()) {
        hasNegative = true;
      } else {
        throw InvalidArgument("RootSystem: R intersects a line in more than {+alpha, -alpha}");
      }
    }
    if (!hasNegative) throw InvalidArgument("RootSystem: root set is not closed under negation");
  }
}

RootSystem RootSystem::rankOne(double k) {
  return RootSystem(std::vector<Point>{Point::Constant(1, 1.0), Point::Constant(1, -1.0)}, {k, k});
}

RootSystem RootSystem::productZ2(const std::vector<double>& k) {
  const int d = static_cast<int>(k.size());
  std::vector<Point> roots;
  std::vector<double> mult;
  for (int i = 0; i < d; ++i) {
    roots.push_back(Point::Unit(d, i));
    roots.push_back(-Point::Unit(d, i));
    mult.push_back(k[static_cast<std::size_t>(i)]);
    mult.push_back(k[static_cast<std::size_t>(i)]);
  }
  return RootSystem(std::move(roots), std::move(mult));
}

RootSystem RootSystem::dihedral(int m, double k) {
  if (m < 1) throw InvalidArgument("dihedral: m must be >= 1");
  std::vector<Point> roots;
  std::vector<double> mult;
  for (int j = 0; j < 2 * m; ++j) {
    const double angle = std::numbers::pi * j / m;
    Point r(2);
    r << std::cos(angle), std::sin(angle);
    roots.push_back(r);
    mult.push_back(k);
  }
  return RootSystem(std::move(roots), std::move(mult));
}

RootSystem RootSystem::scaled(double c) const {
  if (c == 0.0) throw InvalidArgument("RootSystem::scaled: zero factor");
  const Rational exactC = rationalFromDouble(c);
  std::vector<std::vector<Rational>> roots = exactRoots_;
  for (auto& r : roots)
    for (auto& v : r) v *= exactC;
  return RootSystem(std::move(roots), exactK_);
}

std::vector<Matrix> generateGroup(const RootSystem& roots, std::size_t cap) {
  const int d = roots.dim();
  std::vector<Matrix> generators;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Matrix s = reflectionMatrix(roots.root(i));
    if (std::none_of(generators.begin(), generators.end(), [&](const Matrix& g) { return sameMatrix(g, s); })) {
      generators.push_back(std::move(s));
    }
  }

  std::vector<Matrix> group{Matrix::Identity(d, d)};
  std::deque<std::size_t> frontier{0};
  while (!frontier.empty()) {
    const Matrix current = group[frontier.front()];
    frontier.pop_front();
    for (const auto& g : generators) {
      Matrix next = g * current;
      if (std::any_of(group.begin(), group.end(), [&](const Matrix& h) { return sameMatrix(h, next); })) continue;
      if (group.size() >= cap) {
        throw NonTerminationError("generateGroup: group order exceeds cap " + std::to_string(cap));
      }
      group.push_back(std::move(next));
      frontier.push_back(group.size() - 1);
    }
  }
  return group;
}

DunklModel::DunklModel(RootSystem roots, std::size_t groupCap) : roots_(std::move(roots)) {
  group_ = generateGroup(roots_, groupCap);

  // R must be W-stable and k constant on W-orbits.
  for (const auto& w : group_) {
    for (std::size_t i = 0; i < roots_.size(); ++i) {
      const Point image = w * roots_.root(i);
      bool found = false;
      for (std::size_t j = 0; j < roots_.size(); ++j) {
        if ((image - roots_.root(j)).norm() <= 1e-9 * roots_.root(i).norm()) {
          if (std::abs(roots_.multiplicity(i) - roots_.multiplicity(j)) > 1e-12) {
            throw InvalidArgument("DunklModel: multiplicity is not constant on W-orbits");
          }
          found = true;
          break;
        }
      }
      if (!found) throw InvalidArgument("DunklModel: root set is not invariant under the generated group");
    }
  }

  exactGamma_ = 0;
  for (std::size_t i = 0; i < roots_.size(); ++i) exactGamma_ += roots_.exactMultiplicity(i);
  gamma_ = exactGamma_.get_d();
  lambda_ = gamma_ / 2.0 + dim() / 2.0 - 1.0;

  const int d = dim();
  axisK_.assign(static_cast<std::size_t>(d), 0.0);
  axisLength_.assign(static_cast<std::size_t>(d), 1.0);
  productZ2_ = true;
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const Point& r = roots_.root(i);
    int axis = -1;
    int nonzero = 0;
    for (int j = 0; j < d; ++j) {
      if (r(j) != 0.0) {
        ++nonzero;
        axis = j;
      }
    }
    if (nonzero != 1) {
      productZ2_ = false;
      continue;
    }
    axisK_[static_cast<std::size_t>(axis)] = roots_.multiplicity(i);
    axisLength_[static_cast<std::size_t>(axis)] = std::abs(r(axis));
  }
  if (!productZ2_) {
    axisK_.clear();
    axisLength_.clear();
  }
}

double DunklModel::axisMultiplicity(int axis) const {
  requireProductZ2("axisMultiplicity");
  return axisK_.at(static_cast<std::size_t>(axis));
}

double DunklModel::axisRootLength(int axis) const {
  requireProductZ2("axisRootLength");
  return axisLength_.at(static_cast<std::size_t>(axis));
}

void DunklModel::requireProductZ2(const char* operation) const {
  if (!productZ2_) {
    throw UnsupportedError(std::string(operation) + ": needs a product Z2^d model (all roots on coordinate axes)");
  }
}

void DunklModel::requirePositiveLambda(const char* operation) const {
  if (!(lambda_ > 0.0)) throw InvalidArgument(std::string(operation) + ": needs lambda > 0");
}

std::vector<Point> orbit(const DunklModel& model, const Point& y) {
  std::vector<Point> points;
  const double scale = std::max(1.0, y.norm());
  for (const auto& w : model.group()) {
    Point p = w * y;
    if (std::none_of(points.begin(), points.end(), [&](const Point& q) { return (q - p).norm() <= 1e-12 * scale; })) {
      points.push_back(std::move(p));
    }
  }
  return points;
}

double orbitDistance(const DunklModel& model, const Point& x, const Point& y) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& w : model.group()) best = std::min(best, (w * y - x).norm());
  return best;
}

RootSystem parseModelConfig(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int dim = -1;
  std::vector<std::vector<Rational>> roots;
  std::vector<Rational> k;
  bool haveRoots = false;
  bool haveK = false;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("model config line " + std::to_string(lineNo) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "dim") {
        dim = std::stoi(value);
      } else if (key == "roots") {
        for (const auto& rootText : split(value, ';')) {
          if (rootText.empty()) continue;
          std::vector<Rational> root;
          for (const auto& c : split(rootText, ',')) root.push_back(parseRational(c));
          roots.push_back(std::move(root));
        }
        haveRoots = true;
      } else if (key == "k") {
        for (const auto& c : split(value, ',')) {
          if (!c.empty()) k.push_back(parseRational(c));
        }
        haveK = true;
      } else {
        throw ConfigError("model config line " + std::to_string(lineNo) + ": unknown key '" + key + "'");
      }
    } catch (const ParseError& e) {
      throw ConfigError("model config line " + std::to_string(lineNo) + ": " + e.what());
    } catch (const std::logic_error&) {
      throw ConfigError("model config line " + std::to_string(lineNo) + ": bad value '" + value + "'");
    }
  }
  if (!haveRoots || !haveK) throw ConfigError("model config: both 'roots' and 'k' are required");
  if (k.size() == 1 && roots.size() > 1) k.assign(roots.size(), k.front());
  for (const auto& r : roots) {
    if (dim >= 0 && static_cast<int>(r.size()) != dim) throw ConfigError("model config: root length differs from dim");
  }
  try {
    return RootSystem(std::move(roots), std::move(k));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("model config: ") + e.what());
  }
}

DunklModel loadModel(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read model file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return DunklModel(parseModelConfig(buffer.str()));
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("model file '") + path + "': " + e.what());
  }
}

}  // namespace dunklpot
