#pragma once

#include "lkm/vector.hpp"

namespace lkm {

/// g(x) = 1/2 x'Px + b'x with P symmetric positive definite.
///
/// The Cholesky factor of P is computed once; every conjugate evaluation
/// reuses it. `strong_convexity()` is lambda_min(P), `smoothness()` is
/// lambda_max(P). The conjugate g*(y) = 1/2 (y-b)' P^{-1} (y-b) is therefore
/// (1/lambda_max)-strongly convex and (1/lambda_min)-smooth.
class QuadraticObjective {
 public:
  QuadraticObjective(Matrix p, Vector b);

  /// g(x) = 1/2 ||x||^2 in dimension n.
  static QuadraticObjective identity(int n);
  /// Ingest x'Qx + b'x as P = 2 sym(Q); quadratic forms only see sym(Q).
  static QuadraticObjective from_quadratic_form(const Matrix& q, Vector b);

  int dimension() const noexcept { return static_cast<int>(b_.size()); }
  const Matrix& hessian() const noexcept { return p_; }
  const Vector& linear() const noexcept { return b_; }

  double value(const Vector& x) const;
  Vector gradient(const Vector& x) const;

  double conjugate_value(const Vector& y) const;
  /// argmax_x y'x - g(x) = P^{-1}(y - b).
  Vector conjugate_gradient(const Vector& y) const;

  /// P^{-1} applied to each column of `rhs`.
  Matrix solve(const Matrix& rhs) const;

  double strong_convexity() const noexcept { return alpha_; }
  double smoothness() const noexcept { return beta_; }

 private:
  Matrix p_;
  Vector b_;
  Eigen::LLT<Matrix> llt_;
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

struct Moduli {
  double strong_convexity;
  double smoothness;
};

inline Moduli moduli(const QuadraticObjective& g) { return {g.strong_convexity(), g.smoothness()}; }

}  // namespace lkm
