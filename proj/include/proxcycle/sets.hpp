#ifndef PROXCYCLE_SETS_HPP
#define PROXCYCLE_SETS_HPP

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <variant>

#include "proxcycle/state.hpp"

namespace proxcycle {

// Closed convex constraint sets with exact (closed-form) orthogonal
// projections. Each variant is nonempty by construction.

struct Hyperplane {
  StateVector a;  // normal, nonzero
  double b;       // {x : a.x = b}
};

struct Halfspace {
  StateVector a;
  double b;  // {x : a.x <= b}
};

struct Box {
  StateVector lower;
  StateVector upper;  // componentwise lower <= upper
};

struct Ball {
  StateVector center;
  double radius;  // > 0
};

class ConvexSet {
 public:
  using Variant = std::variant<Hyperplane, Halfspace, Box, Ball>;

  static ConvexSet hyperplane(StateVector a, double b) {
    require_nonzero(a);
    return ConvexSet(Hyperplane{std::move(a), b});
  }

  static ConvexSet halfspace(StateVector a, double b) {
    require_nonzero(a);
    return ConvexSet(Halfspace{std::move(a), b});
  }

  static ConvexSet box(StateVector lower, StateVector upper) {
    check_same_dim(lower, upper);
    for (std::size_t j = 0; j < lower.dim(); ++j) {
      if (lower[j] > upper[j]) throw value_error("Box requires lower <= upper");
    }
    return ConvexSet(Box{std::move(lower), std::move(upper)});
  }

  static ConvexSet ball(StateVector center, double radius) {
    if (!(radius > 0.0)) throw value_error("Ball requires radius > 0");
    return ConvexSet(Ball{std::move(center), radius});
  }

  std::size_t dim() const {
    return std::visit(
        [](const auto& s) -> std::size_t {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Hyperplane> || std::is_same_v<S, Halfspace>)
            return s.a.dim();
          else if constexpr (std::is_same_v<S, Box>)
            return s.lower.dim();
          else
            return s.center.dim();
        },
        v_);
  }

  /// Nearest point of the set, in the induced norm.
  StateVector project(const StateVector& x) const {
    if (x.dim() != dim()) throw dimension_error(dim(), x.dim());
    return std::visit(
        [&x](const auto& s) -> StateVector {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Hyperplane>) {
            const double t = (inner(s.a, x) - s.b) / inner(s.a, s.a);
            return axpy(-t, s.a, x);
          } else if constexpr (std::is_same_v<S, Halfspace>) {
            const double viol = inner(s.a, x) - s.b;
            if (viol <= 0.0) return x;
            return axpy(-viol / inner(s.a, s.a), s.a, x);
          } else if constexpr (std::is_same_v<S, Box>) {
            std::vector<double> out(x.dim());
            for (std::size_t j = 0; j < x.dim(); ++j)
              out[j] = std::clamp(x[j], s.lower[j], s.upper[j]);
            return StateVector(std::move(out));
          } else {
            const StateVector r = x - s.center;
            const double d = norm(r);
            if (d <= s.radius) return x;
            return axpy(s.radius / d, r, s.center);
          }
        },
        v_);
  }

  /// Membership up to tolerance tol on the defining (in)equalities.
  bool contains(const StateVector& x, double tol) const {
    if (tol < 0.0) throw value_error("contains requires tol >= 0");
    if (x.dim() != dim()) throw dimension_error(dim(), x.dim());
    return std::visit(
        [&](const auto& s) -> bool {
          using S = std::decay_t<decltype(s)>;
          if constexpr (std::is_same_v<S, Hyperplane>) {
            return std::abs(inner(s.a, x) - s.b) <= tol;
          } else if constexpr (std::is_same_v<S, Halfspace>) {
            return inner(s.a, x) - s.b <= tol;
          } else if constexpr (std::is_same_v<S, Box>) {
            for (std::size_t j = 0; j < x.dim(); ++j) {
              if (x[j] < s.lower[j] - tol || x[j] > s.upper[j] + tol) return false;
            }
            return true;
          } else {
            return proxcycle::distance(x, s.center) - s.radius <= tol;
          }
        },
        v_);
  }

  /// ||x - project(x)||; zero iff x is (numerically) a member.
  double distance(const StateVector& x) const {
    return proxcycle::distance(x, project(x));
  }

  const Variant& raw() const { return v_; }

  std::string kind_name() const {
    switch (v_.index()) {
      case 0: return "hyperplane";
      case 1: return "halfspace";
      case 2: return "box";
      default: return "ball";
    }
  }

  bool operator==(const ConvexSet& other) const {
    if (v_.index() != other.v_.index()) return false;
    return std::visit(
        [&other](const auto& s) -> bool {
          using S = std::decay_t<decltype(s)>;
          const auto& o = std::get<S>(other.v_);
          if constexpr (std::is_same_v<S, Hyperplane> || std::is_same_v<S, Halfspace>)
            return s.a == o.a && s.b == o.b;
          else if constexpr (std::is_same_v<S, Box>)
            return s.lower == o.lower && s.upper == o.upper;
          else
            return s.center == o.center && s.radius == o.radius;
        },
        v_);
  }

 private:
  explicit ConvexSet(Variant v) : v_(std::move(v)) {}

  static void require_nonzero(const StateVector& a) {
    if (norm(a) == 0.0) throw value_error("normal vector must be nonzero");
  }

  Variant v_;
};

}  // namespace proxcycle

#endif  // PROXCYCLE_SETS_HPP
