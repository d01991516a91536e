#ifndef PROXCYCLE_PENALTY_HPP
#define PROXCYCLE_PENALTY_HPP

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "proxcycle/sets.hpp"
#include "proxcycle/state.hpp"

namespace proxcycle {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

// phi(x) = (w/2) (a.x - b)^2
struct AffineQuadratic {
  StateVector a;
  double b;
  double w;
};

// phi(x) = 0 on the set, +inf off it.
struct Indicator {
  ConvexSet set;
};

// phi(x) = (w/2) dist(set, x)^2
struct SquaredDistance {
  ConvexSet set;
  double w;
};

/// A convex penalty measuring constraint violation, with a closed-form
/// proximal operator. phi(x) = 0 exactly on the underlying constraint set.
class Penalty {
 public:
  using Variant = std::variant<AffineQuadratic, Indicator, SquaredDistance>;

  static Penalty affine_quadratic(StateVector a, double b, double w = 1.0) {
    if (norm(a) == 0.0) throw value_error("AffineQuadratic requires nonzero a");
    if (!(w > 0.0)) throw value_error("AffineQuadratic requires w > 0");
    return Penalty(AffineQuadratic{std::move(a), b, w});
  }

  static Penalty indicator(ConvexSet set) { return Penalty(Indicator{std::move(set)}); }

  static Penalty squared_distance(ConvexSet set, double w = 1.0) {
    if (!(w > 0.0)) throw value_error("SquaredDistance requires w > 0");
    return Penalty(SquaredDistance{std::move(set), w});
  }

  std::size_t dim() const {
    return std::visit(
        [](const auto& p) -> std::size_t {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, AffineQuadratic>)
            return p.a.dim();
          else
            return p.set.dim();
        },
        v_);
  }

  /// Penalty value; +inf only for the indicator variant.
  double eval(const StateVector& x) const {
    if (x.dim() != dim()) throw dimension_error(dim(), x.dim());
    return std::visit(
        [&x](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, AffineQuadratic>) {
            const double r = inner(p.a, x) - p.b;
            return 0.5 * p.w * r * r;
          } else if constexpr (std::is_same_v<P, Indicator>) {
            return p.set.contains(x, 0.0) ? 0.0 : kInfinity;
          } else {
            const double d = p.set.distance(x);
            return 0.5 * p.w * d * d;
          }
        },
        v_);
  }

  /// Gradient where defined. The indicator variant is nondifferentiable.
  StateVector grad(const StateVector& x) const {
    if (x.dim() != dim()) throw dimension_error(dim(), x.dim());
    return std::visit(
        [&x](const auto& p) -> StateVector {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, AffineQuadratic>) {
            return (p.w * (inner(p.a, x) - p.b)) * p.a;
          } else if constexpr (std::is_same_v<P, Indicator>) {
            throw nondifferentiable_error("indicator penalty has no gradient");
          } else {
            return p.w * (x - p.set.project(x));
          }
        },
        v_);
  }

  /// prox_{lambda phi}(x) = argmin_z [phi(z) + (1/2 lambda) ||z - x||^2].
  StateVector prox(double lambda, const StateVector& x) const {
    if (!(lambda > 0.0)) throw value_error("prox requires lambda > 0");
    if (x.dim() != dim()) throw dimension_error(dim(), x.dim());
    return std::visit(
        [&](const auto& p) -> StateVector {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, AffineQuadratic>) {
            const double t =
                lambda * p.w * (inner(p.a, x) - p.b) / (1.0 + lambda * p.w * inner(p.a, p.a));
            return axpy(-t, p.a, x);
          } else if constexpr (std::is_same_v<P, Indicator>) {
            return p.set.project(x);
          } else {
            const double t = lambda * p.w / (1.0 + lambda * p.w);
            return axpy(t, p.set.project(x) - x, x);
          }
        },
        v_);
  }

  const Variant& raw() const { return v_; }

  std::string kind_name() const {
    switch (v_.index()) {
      case 0: return "affine_quadratic";
      case 1: return "indicator";
      default: return "squared_distance";
    }
  }

  bool operator==(const Penalty& other) const {
    if (v_.index() != other.v_.index()) return false;
    return std::visit(
        [&other](const auto& p) -> bool {
          using P = std::decay_t<decltype(p)>;
          const auto& o = std::get<P>(other.v_);
          if constexpr (std::is_same_v<P, AffineQuadratic>)
            return p.a == o.a && p.b == o.b && p.w == o.w;
          else if constexpr (std::is_same_v<P, Indicator>)
            return p.set == o.set;
          else
            return p.set == o.set && p.w == o.w;
        },
        v_);
  }

 private:
  explicit Penalty(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// Summed penalty energy F(x) = sum_i phi_i(x) + (mu/2) ||x||^2.
class EnergyFunction {
 public:
  explicit EnergyFunction(std::vector<Penalty> terms, double regularizer_mu = 0.0)
      : terms_(std::move(terms)), mu_(regularizer_mu) {
    if (terms_.empty()) throw value_error("EnergyFunction requires at least one term");
    if (mu_ < 0.0) throw value_error("regularizer_mu must be >= 0");
    const std::size_t d = terms_.front().dim();
    for (const auto& t : terms_) {
      if (t.dim() != d) throw dimension_error(d, t.dim());
    }
  }

  const std::vector<Penalty>& terms() const { return terms_; }
  double regularizer_mu() const { return mu_; }
  std::size_t dim() const { return terms_.front().dim(); }

  /// May return +inf when an indicator term is violated.
  double eval(const StateVector& x) const {
    if (x.dim() != dim()) throw dimension_error(dim(), x.dim());
    double s = 0.0;
    for (const auto& t : terms_) {
      const double v = t.eval(x);
      if (v == kInfinity) return kInfinity;
      s += v;
    }
    if (mu_ > 0.0) s += 0.5 * mu_ * inner(x, x);
    return s;
  }

 private:
  std::vector<Penalty> terms_;
  double mu_;
};

}  // namespace proxcycle

#endif  // PROXCYCLE_PENALTY_HPP
