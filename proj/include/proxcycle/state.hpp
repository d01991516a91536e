#ifndef PROXCYCLE_STATE_HPP
#define PROXCYCLE_STATE_HPP

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <utility>
#include <vector>

#include "proxcycle/errors.hpp"

namespace proxcycle {

/// A point in a finite-dimensional real inner-product space.
///
/// Coordinates are 64-bit floats, validated finite at construction.
/// Instances are immutable values; copying is cheap enough for the
/// dimensions this library targets (<= 1000).
class StateVector {
 public:
  explicit StateVector(std::vector<double> coords) : coords_(std::move(coords)) {
    if (coords_.empty()) throw value_error("StateVector requires dim >= 1");
    for (double c : coords_) {
      if (!std::isfinite(c)) throw value_error("StateVector entry is not finite");
    }
  }

  StateVector(std::initializer_list<double> coords)
      : StateVector(std::vector<double>(coords)) {}

  static StateVector zeros(std::size_t dim) {
    return StateVector(std::vector<double>(dim, 0.0));
  }

  std::size_t dim() const { return coords_.size(); }
  double operator[](std::size_t i) const { return coords_[i]; }
  const std::vector<double>& coords() const { return coords_; }

  bool operator==(const StateVector& other) const = default;

 private:
  std::vector<double> coords_;
};

inline void check_same_dim(const StateVector& u, const StateVector& v) {
  if (u.dim() != v.dim()) throw dimension_error(u.dim(), v.dim());
}

/// Euclidean inner product <u, v>.
inline double inner(const StateVector& u, const StateVector& v) {
  check_same_dim(u, v);
  double s = 0.0;
  for (std::size_t j = 0; j < u.dim(); ++j) s += u[j] * v[j];
  return s;
}

/// Induced norm ||u||.
inline double norm(const StateVector& u) { return std::sqrt(inner(u, u)); }

/// alpha * u + v, componentwise.
inline StateVector axpy(double alpha, const StateVector& u, const StateVector& v) {
  check_same_dim(u, v);
  std::vector<double> out(u.dim());
  for (std::size_t j = 0; j < u.dim(); ++j) out[j] = alpha * u[j] + v[j];
  return StateVector(std::move(out));
}

inline StateVector operator+(const StateVector& u, const StateVector& v) {
  return axpy(1.0, u, v);
}

inline StateVector operator-(const StateVector& u, const StateVector& v) {
  return axpy(-1.0, v, u);
}

inline StateVector operator*(double alpha, const StateVector& u) {
  std::vector<double> out(u.dim());
  for (std::size_t j = 0; j < u.dim(); ++j) out[j] = alpha * u[j];
  return StateVector(std::move(out));
}

/// ||u - v|| without constructing the difference.
inline double distance(const StateVector& u, const StateVector& v) {
  check_same_dim(u, v);
  double s = 0.0;
  for (std::size_t j = 0; j < u.dim(); ++j) {
    const double d = u[j] - v[j];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace proxcycle

#endif  // PROXCYCLE_STATE_HPP
