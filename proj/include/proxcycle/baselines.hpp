#ifndef PROXCYCLE_BASELINES_HPP
#define PROXCYCLE_BASELINES_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "proxcycle/linalg.hpp"
#include "proxcycle/penalty.hpp"
#include "proxcycle/state.hpp"

namespace proxcycle {

/// Exact minimizer of sum_i (w_i/2)(a_i.x - b_i)^2 + (mu/2)||x||^2 via the
/// normal equations (sum w_i a_i a_i^T + mu I) x = sum w_i b_i a_i.
/// Models the monolithic single-agent update: all penalties resolved
/// jointly as one trade-off.
inline StateVector monolithic_minimizer(const EnergyFunction& f) {
  const std::size_t n = f.dim();
  std::vector<double> m(n * n, 0.0);
  std::vector<double> rhs(n, 0.0);
  for (const auto& term : f.terms()) {
    const auto* q = std::get_if<AffineQuadratic>(&term.raw());
    if (!q)
      throw unsupported_objective_error(
          "monolithic_minimizer supports affine-quadratic terms only, got " + term.kind_name());
    for (std::size_t i = 0; i < n; ++i) {
      rhs[i] += q->w * q->b * q->a[i];
      for (std::size_t j = 0; j < n; ++j) m[i * n + j] += q->w * q->a[i] * q->a[j];
    }
  }
  const double mu = f.regularizer_mu();
  for (std::size_t i = 0; i < n; ++i) m[i * n + i] += mu;
  return StateVector(solve_spd(std::move(m), std::move(rhs)));
}

/// Arithmetic mean of the per-term minimum-norm minimizers
/// (b_i/||a_i||^2) a_i. The individual optima are non-unique; the
/// min-norm representative is the projection of the origin onto each
/// term's zero set.
inline StateVector averaging_baseline(const std::vector<Penalty>& terms) {
  if (terms.empty()) throw value_error("averaging_baseline requires at least one term");
  const std::size_t n = terms.front().dim();
  StateVector sum = StateVector::zeros(n);
  for (const auto& term : terms) {
    const auto* q = std::get_if<AffineQuadratic>(&term.raw());
    if (!q)
      throw unsupported_objective_error(
          "averaging_baseline supports affine-quadratic terms only, got " + term.kind_name());
    sum = axpy(q->b / inner(q->a, q->a), q->a, sum);
  }
  return (1.0 / static_cast<double>(terms.size())) * sum;
}

struct GridResult {
  StateVector point;
  double value;
};

class oracle_scale_error : public error {
 public:
  using error::error;
};

/// Exhaustive evaluation of F on a regular grid over [lower, upper].
/// Brute-force oracle for dim <= 3; ties broken by lexicographically
/// smallest grid index.
inline GridResult grid_minimize(const EnergyFunction& f, const StateVector& lower,
                                const StateVector& upper, std::size_t points_per_axis) {
  const std::size_t n = f.dim();
  if (n > 3) throw oracle_scale_error("grid_minimize supports dim <= 3");
  if (lower.dim() != n || upper.dim() != n) throw dimension_error(n, lower.dim());
  if (points_per_axis < 2 || points_per_axis > 2001)
    throw oracle_scale_error("points_per_axis must be in [2, 2001]");
  for (std::size_t j = 0; j < n; ++j) {
    if (!(lower[j] < upper[j])) throw value_error("grid_minimize requires lower < upper");
  }

  std::vector<double> coords(n, 0.0);
  std::vector<std::size_t> idx(n, 0);
  const double denom = static_cast<double>(points_per_axis - 1);
  auto node = [&](std::size_t axis, std::size_t i) {
    return lower[axis] + (upper[axis] - lower[axis]) * static_cast<double>(i) / denom;
  };

  double best_value = kInfinity;
  std::vector<double> best(n, 0.0);
  bool have_best = false;
  while (true) {
    for (std::size_t j = 0; j < n; ++j) coords[j] = node(j, idx[j]);
    const double v = f.eval(StateVector(coords));
    if (!have_best || v < best_value) {
      best_value = v;
      best = coords;
      have_best = true;
    }
    // lexicographic advance, last axis fastest
    std::size_t axis = n;
    while (axis-- > 0) {
      if (++idx[axis] < points_per_axis) break;
      idx[axis] = 0;
      if (axis == 0) return GridResult{StateVector(std::move(best)), best_value};
    }
  }
}

/// Central-difference gradient of F, coordinatewise with step h.
inline StateVector finite_diff_grad(const EnergyFunction& f, const StateVector& x, double h) {
  if (!(h > 0.0)) throw value_error("finite_diff_grad requires h > 0");
  const std::size_t n = f.dim();
  if (x.dim() != n) throw dimension_error(n, x.dim());
  std::vector<double> g(n, 0.0);
  std::vector<double> probe = x.coords();
  for (std::size_t j = 0; j < n; ++j) {
    probe[j] = x[j] + h;
    const double fp = f.eval(StateVector(probe));
    probe[j] = x[j] - h;
    const double fm = f.eval(StateVector(probe));
    probe[j] = x[j];
    if (fp == kInfinity || fm == kInfinity)
      throw nondifferentiable_error("finite_diff_grad stencil hits an indicator boundary");
    g[j] = (fp - fm) / (2.0 * h);
  }
  return StateVector(std::move(g));
}

}  // namespace proxcycle

#endif  // PROXCYCLE_BASELINES_HPP
