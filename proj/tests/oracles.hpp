// Test-only brute-force oracles. These deliberately avoid the closed-form
// paths in the library: projections and proxes are checked against grid
// enumeration of their defining minimization problems.

#ifndef PROXCYCLE_TESTS_ORACLES_HPP
#define PROXCYCLE_TESTS_ORACLES_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "proxcycle/penalty.hpp"
#include "proxcycle/sets.hpp"
#include "proxcycle/state.hpp"

namespace oracles {

using proxcycle::ConvexSet;
using proxcycle::Penalty;
using proxcycle::StateVector;

// Minimize `objective` over the grid points of [lower, upper]^dim that
// satisfy `feasible`. Returns the best grid point.
inline StateVector grid_argmin(
    const std::function<double(const StateVector&)>& objective,
    const std::function<bool(const StateVector&)>& feasible, const StateVector& lower,
    const StateVector& upper, std::size_t points_per_axis) {
  const std::size_t n = lower.dim();
  std::vector<std::size_t> idx(n, 0);
  std::vector<double> coords(n, 0.0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<double> best_pt;
  const double denom = static_cast<double>(points_per_axis - 1);
  while (true) {
    for (std::size_t j = 0; j < n; ++j)
      coords[j] = lower[j] + (upper[j] - lower[j]) * static_cast<double>(idx[j]) / denom;
    const StateVector z(coords);
    if (feasible(z)) {
      const double v = objective(z);
      if (v < best) {
        best = v;
        best_pt = coords;
      }
    }
    std::size_t axis = n;
    while (axis-- > 0) {
      if (++idx[axis] < points_per_axis) break;
      idx[axis] = 0;
      if (axis == 0) return StateVector(best_pt);
    }
  }
}

// Nearest grid point of a set to x (grid restricted to members). The set
// membership tolerance is one grid cell diagonal so that boundary-only
// sets (hyperplanes) keep feasible grid points.
inline StateVector project_oracle(const ConvexSet& set, const StateVector& x,
                                  const StateVector& lower, const StateVector& upper,
                                  std::size_t points_per_axis, double membership_tol) {
  return grid_argmin([&x](const StateVector& z) { return proxcycle::distance(z, x); },
                     [&](const StateVector& z) { return set.contains(z, membership_tol); },
                     lower, upper, points_per_axis);
}

// 1-D parametric oracle for a hyperplane in R^2: walk along the line at
// the given resolution and return the point nearest x.
inline StateVector hyperplane_project_oracle_2d(const StateVector& a, double b,
                                                const StateVector& x, double t_range,
                                                double resolution) {
  const double na2 = proxcycle::inner(a, a);
  const StateVector foot = (b / na2) * a;  // min-norm point of the line
  const double na = std::sqrt(na2);
  const StateVector dir{-a[1] / na, a[0] / na};
  double best = std::numeric_limits<double>::infinity();
  StateVector best_pt = foot;
  for (double t = -t_range; t <= t_range; t += resolution) {
    const StateVector z = proxcycle::axpy(t, dir, foot);
    const double d = proxcycle::distance(z, x);
    if (d < best) {
      best = d;
      best_pt = z;
    }
  }
  return best_pt;
}

// Grid minimization of the prox objective phi(z) + (1/2 lambda)||z - x||^2.
inline StateVector prox_oracle(const Penalty& p, double lambda, const StateVector& x,
                               const StateVector& lower, const StateVector& upper,
                               std::size_t points_per_axis) {
  return grid_argmin(
      [&](const StateVector& z) {
        return p.eval(z) + proxcycle::distance(z, x) * proxcycle::distance(z, x) / (2.0 * lambda);
      },
      [](const StateVector&) { return true; }, lower, upper, points_per_axis);
}

inline StateVector random_vector(std::mt19937_64& rng, std::size_t dim, double lo = -5.0,
                                 double hi = 5.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> c(dim);
  for (auto& v : c) v = dist(rng);
  return StateVector(c);
}

}  // namespace oracles

#endif  // PROXCYCLE_TESTS_ORACLES_HPP
