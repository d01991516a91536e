#ifndef PROXCYCLE_ERRORS_HPP
#define PROXCYCLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace proxcycle {

class error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Operands with incompatible dimensions.
class dimension_error : public error {
 public:
  dimension_error(std::size_t expected, std::size_t got)
      : error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)) {}
};

// Rejected parameter or non-finite value.
class value_error : public error {
 public:
  using error::error;
};

// Gradient requested where the function is not differentiable.
class nondifferentiable_error : public error {
 public:
  using error::error;
};

class unsupported_objective_error : public error {
 public:
  using error::error;
};

}  // namespace proxcycle

#endif  // PROXCYCLE_ERRORS_HPP
