#pragma once

#include <vector>

#include "dunklpot/domain.hpp"
#include "dunklpot/intertwine.hpp"

namespace dunklpot {

/// Finite-difference solution of Delta_k u = 0 in V, u = g on the boundary,
/// on the lattice h Z^d (mapped to itself by every sign flip).
struct GridSolution {
  double h = 0.0;
  int dim = 1;
  std::vector<Point> nodes;  // interior unknowns, lattice order
  std::vector<double> values;
  std::vector<Point> boundaryPoints;  // where boundary data entered the stencils
  std::vector<double> boundaryValues;
  double residual = 0.0;  // max |A u - b| / max(1, |b|)
  double minBoundary = 0.0;
  double maxBoundary = 0.0;
  bool maximumPrincipleHolds = false;

  /// Piecewise-linear (d = 1) or multilinear interpolant; boundary data outside V.
  double interpolate(const Point& x) const;

  PointFn boundaryData;
  std::vector<long> indexOf;  // lattice cell -> node id, -1 when not an unknown
  std::vector<int> extent;    // half-extent N_i of the lattice in cells
};

/// Shortley-Weller stencils next to the boundary; the exact reflection
/// coupling to sigma_i x; the limit stencil (1 + 2k_i) u_ii on the hyperplanes.
GridSolution solveFd(const DunklModel& model, const Domain& v, const PointFn& boundaryData, double h);

}  // namespace dunklpot
