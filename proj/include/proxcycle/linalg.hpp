#ifndef PROXCYCLE_LINALG_HPP
#define PROXCYCLE_LINALG_HPP

#include <cmath>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "proxcycle/errors.hpp"

namespace proxcycle {

/// Raised when a normal system is rank-deficient; carries an (approximate)
/// null direction of the matrix.
class singular_system_error : public error {
 public:
  singular_system_error(std::string what, std::vector<double> direction)
      : error(std::move(what)), direction_(std::move(direction)) {}
  const std::vector<double>& deficient_direction() const { return direction_; }

 private:
  std::vector<double> direction_;
};

namespace detail {

inline std::string format_direction(const std::vector<double>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (j) os << ", ";
    os << v[j];
  }
  os << ")";
  return os.str();
}

}  // namespace detail

/// Solve A x = b for symmetric positive (semi)definite A (row-major n x n)
/// by LDL^T factorization. A vanishing pivot means A is singular; the
/// corresponding null direction is extracted and reported.
inline std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b) {
  const std::size_t n = b.size();
  if (a.size() != n * n) throw value_error("solve_spd: matrix/vector size mismatch");

  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a[j * n + j]));
  const double pivot_tol = 1e-12 * std::max(scale, 1.0);

  // In-place LDL^T: strict lower triangle of `a` holds L, diagonal holds D.
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k] * a[k * n + k];
    if (std::abs(d) <= pivot_tol) {
      // Null direction: v_j = 1, L(0..j-1,0..j-1)^T v = -L(j, 0..j-1)^T.
      std::vector<double> v(n, 0.0);
      v[j] = 1.0;
      for (std::size_t i = j; i-- > 0;) {
        double s = a[j * n + i];
        for (std::size_t k = i + 1; k < j; ++k) s += a[k * n + i] * v[k];
        v[i] = -s;
      }
      double nv = 0.0;
      for (double c : v) nv += c * c;
      nv = std::sqrt(nv);
      for (double& c : v) c /= nv;
      throw singular_system_error(
          "singular normal system; unconstrained direction " + detail::format_direction(v), v);
    }
    a[j * n + j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k] * a[k * n + k];
      a[i * n + j] = s / d;
    }
  }

  // Forward solve L y = b, scale by D, back solve L^T x = y.
  std::vector<double> x = std::move(b);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < i; ++k) x[i] -= a[i * n + k] * x[k];
  for (std::size_t i = 0; i < n; ++i) x[i] /= a[i * n + i];
  for (std::size_t i = n; i-- > 0;)
    for (std::size_t k = i + 1; k < n; ++k) x[i] -= a[k * n + i] * x[k];
  return x;
}

}  // namespace proxcycle

#endif  // PROXCYCLE_LINALG_HPP
