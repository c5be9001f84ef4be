#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "lkm/objective.hpp"
#include "lkm/submodular.hpp"

// Independent reference computations for the tests. Nothing here calls the
// greedy routine or the active-set solver.
namespace testing {

using lkm::Matrix;
using lkm::Vector;

// Vertex for a permutation built straight from set evaluations.
inline Vector vertex_from_order(const lkm::SubmodularFunction& f, const std::vector<int>& order) {
  Vector v(f.size());
  std::vector<int> prefix;
  double prev = 0.0;
  for (int e : order) {
    prefix.push_back(e);
    const double cur = f.evaluate(prefix);
    v[e] = cur - prev;
    prev = cur;
  }
  return v;
}

inline double brute_support(const lkm::SubmodularFunction& f, const Vector& x) {
  std::vector<int> order(static_cast<std::size_t>(f.size()));
  std::iota(order.begin(), order.end(), 0);
  double best = -INFINITY;
  do {
    const Vector v = vertex_from_order(f, order);
    best = std::max(best, v.dot(x));
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

// max over w on the segment [a, b] of -g*(-w), by dense scan plus golden refinement.
inline double segment_dual_max(const lkm::QuadraticObjective& g, const Vector& a, const Vector& b, double* best_s) {
  auto h = [&](double s) { return -g.conjugate_value(-((1 - s) * a + s * b)); };
  double s_best = 0.0, v_best = h(0.0);
  for (int i = 1; i <= 1000; ++i) {
    const double s = i / 1000.0;
    if (h(s) > v_best) v_best = h(s), s_best = s;
  }
  double lo = std::max(0.0, s_best - 1e-3), hi = std::min(1.0, s_best + 1e-3);
  for (int it = 0; it < 200; ++it) {
    const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (h(m1) < h(m2)) lo = m1; else hi = m2;
  }
  const double s = 0.5 * (lo + hi);
  if (h(s) > v_best) v_best = h(s), s_best = s;
  if (best_s) *best_s = s_best;
  return v_best;
}

inline Vector random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = u(rng);
  return v;
}

inline lkm::QuadraticObjective random_spd(std::mt19937_64& rng, int n, double shift) {
  Matrix m(n, n);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = u(rng);
  Matrix p = m.transpose() * m + shift * Matrix::Identity(n, n);
  p = 0.5 * (p + p.transpose()).eval();
  return lkm::QuadraticObjective(p, random_vector(rng, n, -2.0, 2.0));
}

}  // namespace testing
