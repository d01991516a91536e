#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "proxcycle/state.hpp"

#include "oracles.hpp"

using namespace proxcycle;

TEST_CASE("inner product basics") {
  CHECK(inner(StateVector{1, 0}, StateVector{0, 1}) == 0.0);
  CHECK(inner(StateVector{1, 2}, StateVector{1, 2}) == 5.0);

  // brute-force componentwise accumulation
  const StateVector u{3, 4}, v{1, 1};
  double acc = 0.0;
  for (std::size_t j = 0; j < u.dim(); ++j) acc += u[j] * v[j];
  CHECK(acc == 7.0);
  CHECK(inner(u, v) == acc);
}

TEST_CASE("norm basics") {
  CHECK(norm(StateVector{0, 0}) == 0.0);
  CHECK(norm(StateVector{3, 4}) == 5.0);
  CHECK(norm(StateVector{1, 1, 1, 1}) == 2.0);
}

TEST_CASE("axpy basics") {
  const StateVector u{1.5, -2.0}, v{0.25, 3.0};
  CHECK(axpy(0.0, u, v) == v);
  CHECK(axpy(1.0, StateVector{1, 0}, StateVector{0, 1}) == StateVector{1, 1});
  CHECK(norm(axpy(-1.0, u, u)) == 0.0);
}

TEST_CASE("construction rejects bad input") {
  CHECK_THROWS_AS(StateVector(std::vector<double>{}), value_error);
  CHECK_THROWS_AS((StateVector{1.0, std::numeric_limits<double>::quiet_NaN()}), value_error);
  CHECK_THROWS_AS((StateVector{std::numeric_limits<double>::infinity()}), value_error);
  CHECK_THROWS_AS(inner(StateVector{1, 2}, StateVector{1, 2, 3}), dimension_error);
  CHECK_THROWS_AS(axpy(1.0, StateVector{1}, StateVector{1, 2}), dimension_error);
}

TEST_CASE("Cauchy-Schwarz and symmetry properties") {
  std::mt19937_64 rng(42);
  for (int t = 0; t < 200; ++t) {
    const std::size_t dim = 1 + rng() % 8;
    const StateVector u = oracles::random_vector(rng, dim);
    const StateVector v = oracles::random_vector(rng, dim);
    CHECK(std::abs(inner(u, v)) <= norm(u) * norm(v) + 1e-12);
    CHECK(norm(axpy(-1.0, u, v)) == Catch::Approx(norm(axpy(-1.0, v, u))).margin(1e-15));
    CHECK(inner(u, v) == Catch::Approx(inner(v, u)).margin(1e-15));
  }
}
