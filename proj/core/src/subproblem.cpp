#include "lkm/subproblem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "lkm/errors.hpp"

namespace lkm {

VertexSet::VertexSet(std::vector<Vector> vertices) {
  for (const Vector& v : vertices)
    if (!add(v, 0)) throw InvalidInput("vertex set contains duplicate vectors");
}

bool VertexSet::add(const Vector& v, int iteration) {
  if (!vertices_.empty() && v.size() != vertices_[0].size())
    throw InvalidInput("vertex set: dimension mismatch");
  if (contains(v)) return false;
  vertices_.push_back(v);
  provenance_.push_back(iteration);
  return true;
}

int VertexSet::find(const Vector& v) const {
  for (std::size_t i = 0; i < vertices_.size(); ++i)
    if (vertices_[i].size() == v.size() && vertices_[i] == v) return static_cast<int>(i);
  return -1;
}

VertexSet VertexSet::subset(const std::vector<int>& indices) const {
  VertexSet out;
  for (int i : indices) out.add(vertices_[i], provenance_[i]);
  return out;
}

Matrix VertexSet::matrix() const {
  Matrix m(dimension(), static_cast<Eigen::Index>(vertices_.size()));
  for (std::size_t j = 0; j < vertices_.size(); ++j) m.col(static_cast<Eigen::Index>(j)) = vertices_[j];
  return m;
}

namespace {

// Minimiser of 1/2 y'H_SS y + c_S'y subject to sum y = 1, with a tiny
// Tikhonov term so affinely dependent supports still give a solution.
Vector solve_on_support(const Matrix& h, const Vector& c, const std::vector<int>& support, double ridge) {
  const auto m = static_cast<Eigen::Index>(support.size());
  Matrix kkt = Matrix::Zero(m + 1, m + 1);
  Vector rhs(m + 1);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) kkt(a, b) = h(support[a], support[b]);
    kkt(a, a) += ridge;
    kkt(a, m) = 1.0;
    kkt(m, a) = 1.0;
    rhs[a] = -c[support[a]];
  }
  rhs[m] = 1.0;
  const Vector sol = kkt.colPivHouseholderQr().solve(rhs);
  return sol.head(m);
}

}  // namespace

SubproblemSolution solve_subproblem(const VertexSet& vertices, const QuadraticObjective& g,
                                    const SubproblemOptions& options, const Vector& warm_start) {
  const auto k = static_cast<Eigen::Index>(vertices.size());
  const int n = g.dimension();
  if (k == 0) throw InvalidInput("subproblem: empty vertex set");
  if (vertices.dimension() != n) throw InvalidInput("subproblem: dimension mismatch");

  const Matrix w_mat = vertices.matrix();
  const Matrix z = g.solve(w_mat);  // P^{-1} W
  const Vector mb = g.solve(g.linear());
  Matrix h = w_mat.transpose() * z;
  h = 0.5 * (h + h.transpose()).eval();
  const Vector c = w_mat.transpose() * mb;
  const double ridge = 1e-12 * (1.0 + h.diagonal().cwiseAbs().maxCoeff());

  // In lambda-space, the score v_j'x equals -(H lambda + c)_j.
  Vector lambda = Vector::Zero(k);
  if (warm_start.size() == k && warm_start.cwiseMax(0.0).sum() > 0.0) {
    lambda = warm_start.cwiseMax(0.0);
    lambda /= lambda.sum();
  } else {
    Eigen::Index best = 0;
    double best_val = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < k; ++j) {
      const double val = 0.5 * h(j, j) + c[j];
      if (val < best_val) {
        best_val = val;
        best = j;
      }
    }
    lambda[best] = 1.0;
  }
  std::vector<int> support;
  for (Eigen::Index j = 0; j < k; ++j)
    if (lambda[j] > 0.0) support.push_back(static_cast<int>(j));

  const int cap = options.max_iterations > 0 ? options.max_iterations : 50 * (static_cast<int>(k) + n) + 100;
  int iterations = 0;
  double last_violation = std::numeric_limits<double>::infinity();

  auto fail = [&](const char* why) {
    throw ConvergenceError(std::string("subproblem: ") + why,
                           std::vector<double>(lambda.data(), lambda.data() + k), last_violation);
  };

  for (;;) {
    // Minor cycle: move to the affine minimiser on the support, clipping at
    // the boundary of the simplex.
    for (;;) {
      if (++iterations > cap) fail("iteration cap reached");
      const Vector y = solve_on_support(h, c, support, ridge);
      if (!y.allFinite()) fail("singular support system");
      double theta = 1.0;
      int blocking = -1;
      for (std::size_t a = 0; a < support.size(); ++a) {
        const double cur = lambda[support[a]];
        if (y[a] < 0.0) {
          const double ratio = cur / (cur - y[a]);
          if (ratio < theta) {
            theta = ratio;
            blocking = static_cast<int>(a);
          }
        }
      }
      if (blocking < 0) {
        for (std::size_t a = 0; a < support.size(); ++a) lambda[support[a]] = y[a];
      } else {
        for (std::size_t a = 0; a < support.size(); ++a) {
          const int j = support[a];
          lambda[j] += theta * (y[a] - lambda[j]);
        }
        lambda[support[blocking]] = 0.0;
      }
      std::vector<int> kept;
      for (int j : support) {
        if (lambda[j] > options.tol_supp)
          kept.push_back(j);
        else
          lambda[j] = 0.0;
      }
      if (kept.empty()) fail("support collapsed");
      support = std::move(kept);
      lambda /= lambda.sum();
      if (blocking < 0) break;
    }

    // Major cycle: add the most violating vertex, if any.
    const Vector scores = -(h * lambda + c);
    double common = 0.0;
    for (int j : support) common += lambda[j] * scores[j];
    const double scale = 1.0 + scores.cwiseAbs().maxCoeff();
    std::vector<char> in_support(static_cast<std::size_t>(k), 0);
    for (int j : support) in_support[j] = 1;
    Eigen::Index entering = -1;
    double violation = 0.0;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (in_support[j]) continue;
      if (entering < 0 || scores[j] - common > violation) {
        violation = scores[j] - common;
        entering = j;
      }
    }
    last_violation = violation;
    if (entering < 0 || violation <= 0.5 * options.tol_kkt * scale) break;
    support.push_back(static_cast<int>(entering));
  }

  SubproblemSolution sol;
  sol.lambda = lambda;
  sol.w = w_mat * lambda;
  sol.x = g.conjugate_gradient(-sol.w);
  sol.dual_value = -g.conjugate_value(-sol.w);
  sol.t = -std::numeric_limits<double>::infinity();
  double max_abs = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double s = dot(vertices[j], sol.x);
    sol.t = std::max(sol.t, s);
    max_abs = std::max(max_abs, std::abs(s));
  }
  sol.iterations = iterations;

  const double residual = sol.t - dot(sol.w, sol.x);
  if (residual > options.tol_kkt * (1.0 + max_abs)) {
    last_violation = residual;
    fail("KKT residual above tolerance at termination");
  }
  return sol;
}

std::vector<int> active_indices(const VertexSet& vertices, const Vector& x, double t, double tol_act) {
  std::vector<int> out;
  const double floor = t - tol_act * (1.0 + std::abs(t));
  for (std::size_t j = 0; j < vertices.size(); ++j)
    if (dot(vertices[j], x) >= floor) out.push_back(static_cast<int>(j));
  return out;
}

VertexSet extract_active_set(const VertexSet& vertices, const Vector& x, double t, double tol_act) {
  return vertices.subset(active_indices(vertices, x, t, tol_act));
}

std::vector<int> support_indices(const Vector& lambda, double tol_supp) {
  std::vector<int> out;
  for (Eigen::Index j = 0; j < lambda.size(); ++j)
    if (lambda[j] > tol_supp) out.push_back(static_cast<int>(j));
  return out;
}

VertexSet extract_support(const VertexSet& vertices, const Vector& lambda, double tol_supp) {
  return vertices.subset(support_indices(lambda, tol_supp));
}

namespace {

Matrix difference_matrix(const VertexSet& vertices, const std::vector<int>& idx) {
  Matrix d(vertices.dimension(), static_cast<Eigen::Index>(idx.size()) - 1);
  for (std::size_t a = 1; a < idx.size(); ++a)
    d.col(static_cast<Eigen::Index>(a) - 1) = vertices[idx[a]] - vertices[idx[0]];
  return d;
}

}  // namespace

PrunedCombination caratheodory_prune_indices(const VertexSet& vertices, const Vector& lambda) {
  if (static_cast<std::size_t>(lambda.size()) != vertices.size())
    throw InvalidInput("caratheodory: one weight per vertex required");
  std::vector<int> idx;
  std::vector<double> wts;
  for (Eigen::Index j = 0; j < lambda.size(); ++j)
    if (lambda[j] > 0.0) {
      idx.push_back(static_cast<int>(j));
      wts.push_back(lambda[j]);
    }
  if (idx.empty()) throw InvalidInput("caratheodory: weights have empty support");

  while (idx.size() > 1) {
    const Matrix d = difference_matrix(vertices, idx);
    Eigen::JacobiSVD<Matrix> svd(d, Eigen::ComputeFullV);
    const Vector& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv[0] : 0.0;
    const Eigen::Index cols = d.cols();
    Eigen::Index rank = 0;
    for (Eigen::Index i = 0; i < sv.size(); ++i)
      if (sv[i] > 1e-9 * smax) ++rank;
    if (rank == cols) break;

    // Affine dependence: sum mu_j v_j = 0 with sum mu_j = 0.
    const Vector nv = svd.matrixV().col(cols - 1);
    std::vector<double> mu(idx.size());
    mu[0] = -nv.sum();
    for (Eigen::Index a = 0; a < cols; ++a) mu[a + 1] = nv[a];
    if (*std::max_element(mu.begin(), mu.end()) <= 0.0)
      for (double& m : mu) m = -m;

    double theta = std::numeric_limits<double>::infinity();
    std::size_t drop = 0;
    for (std::size_t a = 0; a < mu.size(); ++a)
      if (mu[a] > 0.0 && wts[a] / mu[a] < theta) {
        theta = wts[a] / mu[a];
        drop = a;
      }
    for (std::size_t a = 0; a < mu.size(); ++a) wts[a] -= theta * mu[a];
    wts[drop] = 0.0;

    std::vector<int> nidx;
    std::vector<double> nwts;
    for (std::size_t a = 0; a < idx.size(); ++a)
      if (wts[a] > 0.0) {
        nidx.push_back(idx[a]);
        nwts.push_back(wts[a]);
      }
    idx = std::move(nidx);
    wts = std::move(nwts);
  }

  PrunedCombination out;
  out.indices = idx;
  out.weights = Eigen::Map<const Vector>(wts.data(), static_cast<Eigen::Index>(wts.size()));
  out.weights /= out.weights.sum();
  return out;
}

std::pair<VertexSet, Vector> caratheodory_prune(const VertexSet& vertices, const Vector& lambda,
                                                const Vector& w) {
  PrunedCombination p = caratheodory_prune_indices(vertices, lambda);
  VertexSet kept = vertices.subset(p.indices);
  Vector rebuilt = kept.matrix() * p.weights;
  const double scale = 1.0 + w.cwiseAbs().maxCoeff();
  if ((rebuilt - w).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InvalidInput("caratheodory: weights do not represent the given point");
  return {std::move(kept), std::move(p.weights)};
}

bool check_affine_independence(const VertexSet& vertices) {
  const std::size_t m = vertices.size();
  if (m <= 1) return true;
  if (m > static_cast<std::size_t>(vertices.dimension()) + 1) return false;
  std::vector<int> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  const Matrix d = difference_matrix(vertices, idx);
  Eigen::JacobiSVD<Matrix> svd(d);
  const Vector& sv = svd.singularValues();
  if (sv.size() == 0 || sv[0] == 0.0) return false;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-9 * sv[0]) ++rank;
  return rank == d.cols();
}

KktResiduals kkt_residuals(const VertexSet& vertices, const QuadraticObjective& g,
                           const SubproblemSolution& sol) {
  Vector combo = Vector::Zero(g.dimension());
  double comp = 0.0;
  double max_score = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < vertices.size(); ++j) {
    const double lj = sol.lambda[static_cast<Eigen::Index>(j)];
    combo += lj * vertices[j];
    const double s = dot(vertices[j], sol.x);
    max_score = std::max(max_score, s);
    comp = std::max(comp, lj * std::abs(s - sol.t));
  }
  KktResiduals r;
  r.stationarity = (g.gradient(sol.x) + combo).cwiseAbs().maxCoeff();
  r.comp_slack = comp;
  r.feasibility = std::max({0.0, max_score - sol.t, -sol.lambda.minCoeff(), std::abs(sol.lambda.sum() - 1.0)});
  return r;
}

}  // namespace lkm
