#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lkm {

// Bad arguments: NaN inputs, malformed tables, non-PD matrices.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Brute-force routines refuse problem sizes they cannot enumerate.
class ResourceLimit : public std::length_error {
 public:
  using std::length_error::length_error;
};

// Inner QP hit its iteration cap before meeting the KKT tolerance.
// Carries the best weights seen so callers can inspect or log them.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, std::vector<double> best_lambda, double residual)
      : std::runtime_error(what), best_lambda_(std::move(best_lambda)), residual_(residual) {}

  const std::vector<double>& best_lambda() const noexcept { return best_lambda_; }
  double residual() const noexcept { return residual_; }

 private:
  std::vector<double> best_lambda_;
  double residual_;
};

}  // namespace lkm
