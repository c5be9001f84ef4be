#include "lkm/objective.hpp"

#include <cmath>

#include "lkm/errors.hpp"

namespace lkm {

QuadraticObjective::QuadraticObjective(Matrix p, Vector b) : p_(std::move(p)), b_(std::move(b)) {
  const Eigen::Index n = b_.size();
  if (n < 1) throw InvalidInput("objective dimension must be positive");
  if (p_.rows() != n || p_.cols() != n) throw InvalidInput("objective: P must be n x n");
  if (!p_.allFinite() || !b_.allFinite()) throw InvalidInput("objective: non-finite coefficients");
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      if (std::abs(p_(i, j) - p_(j, i)) > 1e-12) throw InvalidInput("objective: P is not symmetric");

  llt_.compute(p_);
  if (llt_.info() != Eigen::Success) throw InvalidInput("objective: P is not positive definite");

  Eigen::SelfAdjointEigenSolver<Matrix> eig(p_, Eigen::EigenvaluesOnly);
  alpha_ = eig.eigenvalues().minCoeff();
  beta_ = eig.eigenvalues().maxCoeff();
  if (!(alpha_ > 0.0)) throw InvalidInput("objective: P is not positive definite");
}

QuadraticObjective QuadraticObjective::identity(int n) {
  return QuadraticObjective(Matrix::Identity(n, n), Vector::Zero(n));
}

QuadraticObjective QuadraticObjective::from_quadratic_form(const Matrix& q, Vector b) {
  if (q.rows() != q.cols()) throw InvalidInput("quadratic form must be square");
  Matrix p = q + q.transpose();
  return QuadraticObjective(std::move(p), std::move(b));
}

double QuadraticObjective::value(const Vector& x) const {
  return 0.5 * x.dot(p_ * x) + b_.dot(x);
}

Vector QuadraticObjective::gradient(const Vector& x) const { return p_ * x + b_; }

double QuadraticObjective::conjugate_value(const Vector& y) const {
  const Vector r = y - b_;
  return 0.5 * r.dot(llt_.solve(r));
}

Vector QuadraticObjective::conjugate_gradient(const Vector& y) const { return llt_.solve(y - b_); }

Matrix QuadraticObjective::solve(const Matrix& rhs) const { return llt_.solve(rhs); }

}  // namespace lkm
