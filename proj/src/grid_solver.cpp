#include "dunklpot/grid_solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace dunklpot {

namespace {

constexpr double kSnap = 1e-9;  // lattice points this close to the boundary (in units of h) count as on it

struct Lattice {
  int dim;
  double h;
  std::vector<int> extent;

  long size() const {
    long n = 1;
    for (int e : extent) n *= 2 * e + 1;
    return n;
  }
  long linear(const std::vector<int>& idx) const {
    long lin = 0;
    for (int i = 0; i < dim; ++i) {
      if (std::abs(idx[static_cast<std::size_t>(i)]) > extent[static_cast<std::size_t>(i)]) return -1;
      lin = lin * (2 * extent[static_cast<std::size_t>(i)] + 1) + idx[static_cast<std::size_t>(i)] +
            extent[static_cast<std::size_t>(i)];
    }
    return lin;
  }
  std::vector<int> unravel(long lin) const {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (int i = dim - 1; i >= 0; --i) {
      const long span = 2 * extent[static_cast<std::size_t>(i)] + 1;
      idx[static_cast<std::size_t>(i)] = static_cast<int>(lin % span) - extent[static_cast<std::size_t>(i)];
      lin /= span;
    }
    return idx;
  }
  Point point(const std::vector<int>& idx) const {
    Point p(dim);
    for (int i = 0; i < dim; ++i) p(i) = h * idx[static_cast<std::size_t>(i)];
    return p;
  }
};

// Distance s in (0, h] from x along +-e_axis to the boundary.
double crossing(const Domain& v, const Point& x, int axis, double dir, double h) {
  double lo = 0.0;
  double hi = h;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    Point p = x;
    p(axis) += dir * mid;
    if (v.distToBoundary(p) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

GridSolution solveFd(const DunklModel& model, const Domain& v, const PointFn& boundaryData, double h) {
  model.requireProductZ2("solveFd");
  const int d = model.dim();
  if (v.dim() != d) throw InvalidArgument("solveFd: domain dimension differs from model");
  if (!(h > 0.0)) throw InvalidArgument("solveFd: h must be positive");
  if (!v.isWInvariant(model)) throw InvalidArgument("solveFd: V must be W-invariant");

  const auto [bbLo, bbHi] = v.boundingBox();
  Lattice lat{d, h, {}};
  for (int i = 0; i < d; ++i) {
    const double reach = std::max(std::abs(bbLo(i)), std::abs(bbHi(i)));
    lat.extent.push_back(static_cast<int>(std::floor(reach / h + 1e-9)) + 1);
  }
  const long cells = lat.size();
  if (cells > 50'000'000) throw InvalidArgument("solveFd: lattice too large for this h");

  GridSolution sol;
  sol.h = h;
  sol.dim = d;
  sol.boundaryData = boundaryData;
  sol.extent = lat.extent;
  sol.indexOf.assign(static_cast<std::size_t>(cells), -1);
  for (long lin = 0; lin < cells; ++lin) {
    const Point p = lat.point(lat.unravel(lin));
    if (v.distToBoundary(p) > kSnap * h) {
      sol.indexOf[static_cast<std::size_t>(lin)] = static_cast<long>(sol.nodes.size());
      sol.nodes.push_back(p);
    }
  }
  const auto n = static_cast<Eigen::Index>(sol.nodes.size());
  if (n == 0) throw AssemblyError("solveFd: no interior lattice nodes; reduce h");

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  double bmin = std::numeric_limits<double>::infinity();
  double bmax = -std::numeric_limits<double>::infinity();
  auto boundaryValue = [&](const Point& p) {
    const double g = boundaryData(p);
    sol.boundaryPoints.push_back(p);
    sol.boundaryValues.push_back(g);
    bmin = std::min(bmin, g);
    bmax = std::max(bmax, g);
    return g;
  };

  std::vector<std::string> badRows;
  for (long lin = 0; lin < cells; ++lin) {
    const long row = sol.indexOf[static_cast<std::size_t>(lin)];
    if (row < 0) continue;
    const std::vector<int> idx = lat.unravel(lin);
    const Point x = lat.point(idx);
    double diag = 0.0;
    auto couple = [&](long col, double c) { triplets.emplace_back(row, col, c); };

    for (int i = 0; i < d; ++i) {
      const double k = model.axisMultiplicity(i);
      // Neighbour along +-e_i: either an unknown at distance h or boundary data closer in.
      double dist[2];
      long col[2];
      double data[2];
      for (int side = 0; side < 2; ++side) {
        const double dir = side == 0 ? -1.0 : 1.0;
        std::vector<int> nb = idx;
        nb[static_cast<std::size_t>(i)] += side == 0 ? -1 : 1;
        const long nbLin = lat.linear(nb);
        const long id = nbLin < 0 ? -1 : sol.indexOf[static_cast<std::size_t>(nbLin)];
        col[side] = id;
        dist[side] = h;
        data[side] = 0.0;
        if (id >= 0) continue;
        const Point np = lat.point(nb);
        if (std::abs(v.distToBoundary(np)) <= kSnap * h) {
          data[side] = boundaryValue(np);
        } else {
          dist[side] = crossing(v, x, i, dir, h);
          Point bp = x;
          bp(i) += dir * dist[side];
          data[side] = boundaryValue(v.projectToBoundary(bp));
        }
      }
      const double hm = dist[0];
      const double hp = dist[1];
      // Second derivative on the (possibly) uneven three-point stencil.
      double cm = 2.0 / (hm * (hm + hp));
      double cp = 2.0 / (hp * (hm + hp));
      double c0 = -(cm + cp);
      const double xi = x(i);
      if (k != 0.0) {
        if (idx[static_cast<std::size_t>(i)] == 0) {
          // On the hyperplane: 2k u_ii.
          cm *= 1.0 + 2.0 * k;
          cp *= 1.0 + 2.0 * k;
          c0 *= 1.0 + 2.0 * k;
        } else {
          // 2k u_i / x_i with the uneven central difference.
          const double scale = 2.0 * k / (xi * hm * hp * (hm + hp));
          cp += scale * hm * hm;
          cm -= scale * hp * hp;
          c0 -= scale * (hm * hm - hp * hp);
          // -k (u(x) - u(sigma_i x)) / x_i^2
          const double r = k / (xi * xi);
          c0 -= r;
          std::vector<int> mirror = idx;
          mirror[static_cast<std::size_t>(i)] = -mirror[static_cast<std::size_t>(i)];
          const long mLin = lat.linear(mirror);
          const long mid = mLin < 0 ? -1 : sol.indexOf[static_cast<std::size_t>(mLin)];
          if (mid < 0) {
            std::ostringstream os;
            os << "node " << x.transpose() << " has no mirror node";
            badRows.push_back(os.str());
          } else if (mid == row) {
            c0 += r;
          } else {
            couple(mid, r);
          }
        }
      }
      diag += c0;
      for (int side = 0; side < 2; ++side) {
        const double c = side == 0 ? cm : cp;
        if (col[side] >= 0) {
          couple(col[side], c);
        } else {
          rhs(row) -= c * data[side];
        }
      }
    }
    if (!(std::abs(diag) > 0.0) || !std::isfinite(diag)) {
      std::ostringstream os;
      os << "node " << x.transpose() << " has a degenerate diagonal";
      badRows.push_back(os.str());
    }
    couple(row, diag);
  }
  if (!badRows.empty()) {
    std::string msg = "solveFd: assembly failed:";
    for (const auto& b : badRows) msg += " [" + b + "]";
    throw AssemblyError(msg);
  }

  Eigen::SparseMatrix<double> a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(a);
  if (lu.info() != Eigen::Success) throw AssemblyError("solveFd: singular system (" + lu.lastErrorMessage() + ")");
  Eigen::VectorXd u = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw AssemblyError("solveFd: solve failed");
  // One step of iterative refinement keeps the residual at round-off level.
  u += lu.solve(rhs - a * u);

  const double scale = std::max(1.0, rhs.cwiseAbs().maxCoeff());
  sol.residual = (a * u - rhs).cwiseAbs().maxCoeff() / scale;
  sol.values.assign(u.data(), u.data() + u.size());
  sol.minBoundary = bmin;
  sol.maxBoundary = bmax;
  const double slack = 1e-9 * std::max({1.0, std::abs(bmin), std::abs(bmax)});
  sol.maximumPrincipleHolds = u.minCoeff() >= bmin - slack && u.maxCoeff() <= bmax + slack;
  return sol;
}

double GridSolution::interpolate(const Point& x) const {
  if (x.size() != dim) throw InvalidArgument("GridSolution::interpolate: dimension mismatch");
  // Multilinear weights over the enclosing cell; corners that are not
  // unknowns fall back to boundary data at that corner.
  std::vector<int> base(static_cast<std::size_t>(dim));
  std::vector<double> frac(static_cast<std::size_t>(dim));
  for (int i = 0; i < dim; ++i) {
    const double s = x(i) / h;
    const double f = std::floor(s);
    base[static_cast<std::size_t>(i)] = static_cast<int>(f);
    frac[static_cast<std::size_t>(i)] = s - f;
  }
  double sum = 0.0;
  double known = 0.0;
  double fallback = 0.0;
  for (int corner = 0; corner < (1 << dim); ++corner) {
    double w = 1.0;
    std::vector<int> idx = base;
    for (int i = 0; i < dim; ++i) {
      const bool up = (corner >> i) & 1;
      idx[static_cast<std::size_t>(i)] += up ? 1 : 0;
      w *= up ? frac[static_cast<std::size_t>(i)] : 1.0 - frac[static_cast<std::size_t>(i)];
    }
    if (w == 0.0) continue;
    long lin = 0;
    bool inside = true;
    for (int i = 0; i < dim; ++i) {
      const int e = extent[static_cast<std::size_t>(i)];
      const int v = idx[static_cast<std::size_t>(i)];
      if (std::abs(v) > e) inside = false;
      lin = lin * (2 * e + 1) + v + e;
    }
    const long id = inside ? indexOf[static_cast<std::size_t>(lin)] : -1;
    if (id >= 0) {
      sum += w * values[static_cast<std::size_t>(id)];
      known += w;
    } else {
      Point p(dim);
      for (int i = 0; i < dim; ++i) p(i) = h * idx[static_cast<std::size_t>(i)];
      fallback += w * boundaryData(p);
    }
  }
  if (known == 0.0) return boundaryData(x);
  return sum + fallback;
}

}  // namespace dunklpot
