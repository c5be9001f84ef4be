#pragma once

#include <Eigen/Dense>

namespace lkm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Sequential dot product. Scores of memory vertices and of greedy vertices
// must round identically so a vertex already in memory never reports a
// positive gap against itself; Eigen's vectorised dot does not promise that
// across different expression types.
inline double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace lkm
