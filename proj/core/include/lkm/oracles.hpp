#pragma once

#include <string>
#include <vector>

#include "lkm/algorithms.hpp"
#include "lkm/objective.hpp"
#include "lkm/submodular.hpp"
#include "lkm/vector.hpp"

namespace lkm {

enum class OracleMethod { FullVertexQP, SubgradientDescent };

struct OracleSolution {
  double p_star = 0.0;
  Vector x_star;
  Vector w_star;  // empty for the subgradient oracle
  OracleMethod method = OracleMethod::FullVertexQP;
  int iterations = 0;
  double certificate = 0.0;  // duality gap at the returned pair (full-vertex only)
};

/// Enumerates vert B(F) and minimises g*(-W lambda) over the simplex by
/// accelerated projected gradient with restarts. n <= 6.
OracleSolution oracle_full_vertex(const QuadraticObjective& g, const SubmodularFunction& f,
                                  int max_iterations = 100000);

/// Subgradient descent on g + f with step c / sqrt(k) and iterate averaging;
/// p_star is the best value seen. Loose (about 1e-3 relative).
OracleSolution oracle_subgradient(const QuadraticObjective& g, const SubmodularFunction& f, int iterations);

/// max ||v - w|| over pairs of vertices of B(F). n <= 7.
double diameter(const SubmodularFunction& f);

/// Euclidean projection onto the probability simplex (sort based).
Vector project_simplex(const Vector& y);

// Trace validators. Each returns the number of offending iterations.

/// dual_value must not decrease by more than tol (1 + |d|), and must rise by
/// at least `strict_margin` (1 + |d|) whenever the run continues.
int count_lower_bound_violations(const RunResult& r, double tol = 1e-9, double strict_margin = 0.0);
/// dual_value(i) <= min_j primal_value(j) + tol (1 + |.|).
int count_weak_duality_violations(const RunResult& r, double tol = 1e-9);
/// Iterations whose memory set already appeared earlier (needs record_memory).
int count_repeated_memory(const RunResult& r);
/// Iterations with memory_size > bound.
int count_memory_bound_violations(const RunResult& r, int bound);
/// Median of (p* - d(i+1)) / (p* - d(i)) over consecutive iterations with a
/// positive denominator; NaN when there are none.
double median_decay_ratio(const RunResult& r, double p_star);

}  // namespace lkm
