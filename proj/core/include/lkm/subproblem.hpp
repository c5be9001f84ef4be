#pragma once

#include <utility>
#include <vector>

#include "lkm/objective.hpp"
#include "lkm/vector.hpp"

namespace lkm {

/// Ordered collection of distinct vectors (in practice, base-polytope
/// vertices). Index order is insertion order; `provenance` records the outer
/// iteration that inserted each vertex.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vector> vertices);

  /// Appends v unless an exactly equal vector is already present.
  /// Returns false on duplicates.
  bool add(const Vector& v, int iteration = 0);

  std::size_t size() const noexcept { return vertices_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }
  int dimension() const noexcept { return vertices_.empty() ? 0 : static_cast<int>(vertices_[0].size()); }
  const Vector& operator[](std::size_t i) const { return vertices_[i]; }
  int provenance(std::size_t i) const { return provenance_[i]; }
  const std::vector<Vector>& vertices() const noexcept { return vertices_; }

  /// Index of an exactly equal vertex, or -1.
  int find(const Vector& v) const;
  bool contains(const Vector& v) const { return find(v) >= 0; }

  /// Vertices restricted to `indices`, provenance preserved.
  VertexSet subset(const std::vector<int>& indices) const;

  /// Columns are the vertices.
  Matrix matrix() const;

 private:
  std::vector<Vector> vertices_;
  std::vector<int> provenance_;
};

struct SubproblemOptions {
  double tol_kkt = 1e-10;   // relative first-order optimality over conv(W)
  double tol_act = 1e-9;    // relative slack for the active-set test
  double tol_supp = 1e-12;  // weights at or below this are zeroed
  int max_iterations = 0;   // 0 picks 50 (|W| + n) + 100
};

/// Optimal pair for   min g(x) + max_{v in W} v'x   and
///                    max -g*(-w)  s.t.  w in conv(W).
struct SubproblemSolution {
  Vector w;             // dual point, sum_v lambda_v v
  Vector lambda;        // simplex weights, one per vertex of W
  Vector x;             // primal point, grad g*(-w)
  double dual_value = 0.0;  // -g*(-w)
  double t = 0.0;           // epigraph value, max_v v'x
  int iterations = 0;       // inner active-set iterations
};

/// Exact solve by a primal active-set method on the simplex in lambda-space:
/// minimise phi(lambda) = g*(-W lambda). Each step solves the equality
/// constrained KKT system on the working support; infeasible steps are
/// clipped by a ratio test, and the most violating vertex is added when the
/// support is optimal (Wolfe's corral iteration in the P^{-1} metric).
///
/// `warm_start`, when it has one entry per vertex, seeds the support.
/// Throws ConvergenceError if the iteration cap is hit before
///   max_v (v - w)'x <= tol_kkt (1 + max_v |v'x|).
SubproblemSolution solve_subproblem(const VertexSet& vertices, const QuadraticObjective& g,
                                    const SubproblemOptions& options = {},
                                    const Vector& warm_start = Vector());

/// Indices of v with v'x >= t - tol_act (1 + |t|). Never empty for t = max v'x.
std::vector<int> active_indices(const VertexSet& vertices, const Vector& x, double t, double tol_act);
VertexSet extract_active_set(const VertexSet& vertices, const Vector& x, double t, double tol_act);

/// Indices with lambda_v > tol_supp.
std::vector<int> support_indices(const Vector& lambda, double tol_supp);
VertexSet extract_support(const VertexSet& vertices, const Vector& lambda, double tol_supp);

struct PrunedCombination {
  std::vector<int> indices;  // into the input set
  Vector weights;            // one per kept index, on the simplex
};

/// Caratheodory reduction: repeatedly finds an affine dependence among the
/// supported vertices and shifts weight along it until one weight vanishes.
/// The result is affinely independent (so at most n + 1 vertices) and
/// represents the same point.
PrunedCombination caratheodory_prune_indices(const VertexSet& vertices, const Vector& lambda);
std::pair<VertexSet, Vector> caratheodory_prune(const VertexSet& vertices, const Vector& lambda,
                                                const Vector& w);

/// Rank of {v - v0} equals |W| - 1, singular values counted above
/// 1e-9 times the largest.
bool check_affine_independence(const VertexSet& vertices);

struct KktResiduals {
  double stationarity;  // || grad g(x) + sum lambda_v v ||_inf
  double comp_slack;    // max_v lambda_v |v'x - t|
  double feasibility;   // max(0, max v'x - t, -min lambda, |sum lambda - 1|)
};

KktResiduals kkt_residuals(const VertexSet& vertices, const QuadraticObjective& g,
                           const SubproblemSolution& solution);

}  // namespace lkm
