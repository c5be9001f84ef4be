#include "lkm/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include <Eigen/Eigenvalues>

#include "lkm/errors.hpp"

namespace lkm {

Vector project_simplex(const Vector& y) {
  const Eigen::Index k = y.size();
  if (k == 0) throw InvalidInput("project_simplex: empty vector");
  std::vector<double> u(y.data(), y.data() + k);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double theta = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) theta = t;
  }
  return (y.array() - theta).max(0.0).matrix();
}

namespace {

double max_score(const Matrix& w, const Vector& x) { return (w.transpose() * x).maxCoeff(); }

}  // namespace

OracleSolution oracle_full_vertex(const QuadraticObjective& g, const SubmodularFunction& f, int max_iterations) {
  const int n = f.size();
  if (n > 6) throw ResourceLimit("oracle_full_vertex: n must be at most 6");
  if (g.dimension() != n) throw InvalidInput("oracle_full_vertex: dimension mismatch");

  const std::vector<Vector> verts = enumerate_vertices(f);
  const Eigen::Index k = static_cast<Eigen::Index>(verts.size());
  Matrix w(n, k);
  for (Eigen::Index j = 0; j < k; ++j) w.col(j) = verts[static_cast<std::size_t>(j)];
  const Matrix m = g.solve(Matrix::Identity(n, n));
  const Vector& b = g.linear();

  // Lipschitz constant of the gradient: largest eigenvalue of P^{-1} W W'.
  Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> ges(w * w.transpose(), g.hessian(), Eigen::EigenvaluesOnly);
  const double lip = std::max(ges.eigenvalues().maxCoeff(), 1e-300);

  auto grad = [&](const Vector& lam) -> Vector { return w.transpose() * (m * (w * lam + b)); };

  OracleSolution best;
  best.method = OracleMethod::FullVertexQP;
  best.certificate = std::numeric_limits<double>::infinity();

  auto certify = [&](const Vector& lam, int iter) {
    const Vector wl = w * lam;
    const Vector x = -(m * (wl + b));
    const double fx = max_score(w, x);
    const double cert = fx - wl.dot(x);
    if (cert < best.certificate) {
      best.certificate = cert;
      best.x_star = x;
      best.w_star = wl;
      best.p_star = g.value(x) + fx;
      best.iterations = iter;
    }
    return cert <= 1e-12 * (1.0 + std::abs(best.p_star));
  };

  Vector lam = Vector::Constant(k, 1.0 / static_cast<double>(k));
  Vector y = lam;
  double tk = 1.0;
  for (int it = 1; it <= max_iterations; ++it) {
    const Vector gy = grad(y);
    const Vector next = project_simplex(y - gy / lip);
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * tk * tk));
    if (gy.dot(next - lam) > 0.0) {
      // Restart the momentum when it points uphill.
      y = next;
      tk = 1.0;
    } else {
      y = next + ((tk - 1.0) / tn) * (next - lam);
      tk = tn;
    }
    lam = next;
    if ((it % 25 == 0 || it == max_iterations) && certify(lam, it)) break;
  }
  certify(lam, max_iterations);
  return best;
}

OracleSolution oracle_subgradient(const QuadraticObjective& g, const SubmodularFunction& f, int iterations) {
  const int n = f.size();
  if (g.dimension() != n) throw InvalidInput("oracle_subgradient: dimension mismatch");
  if (iterations < 1) throw InvalidInput("oracle_subgradient: iterations must be positive");

  const double c = 1.0 / g.smoothness();
  Vector x = Vector::Zero(n);
  Vector avg = Vector::Zero(n);
  OracleSolution best;
  best.method = OracleMethod::SubgradientDescent;
  best.p_star = std::numeric_limits<double>::infinity();

  auto consider = [&](const Vector& z) {
    const double v = g.value(z) + lovasz_value(f, z);
    if (v < best.p_star) {
      best.p_star = v;
      best.x_star = z;
    }
  };

  for (int k = 1; k <= iterations; ++k) {
    const GreedyResult gr = greedy_vertex(f, x);
    const double v = g.value(x) + gr.value;
    if (v < best.p_star) {
      best.p_star = v;
      best.x_star = x;
    }
    x -= (c / std::sqrt(static_cast<double>(k))) * (g.gradient(x) + gr.vertex);
    avg += (x - avg) / static_cast<double>(k);
  }
  consider(x);
  consider(avg);
  best.iterations = iterations;
  return best;
}

double diameter(const SubmodularFunction& f) {
  if (f.size() > 7) throw ResourceLimit("diameter: n must be at most 7");
  const std::vector<Vector> verts = enumerate_vertices(f);
  double best = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = i + 1; j < verts.size(); ++j) best = std::max(best, (verts[i] - verts[j]).norm());
  return best;
}

int count_lower_bound_violations(const RunResult& r, double tol, double strict_margin) {
  int bad = 0;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    const double prev = r.trace[i - 1].dual_value;
    const double cur = r.trace[i].dual_value;
    const double scale = 1.0 + std::abs(prev);
    if (cur < prev - tol * scale) {
      ++bad;
    } else if (strict_margin > 0.0 && !(cur - prev > strict_margin * scale)) {
      ++bad;
    }
  }
  return bad;
}

int count_weak_duality_violations(const RunResult& r, double tol) {
  double best_primal = std::numeric_limits<double>::infinity();
  for (const IterationRecord& rec : r.trace) best_primal = std::min(best_primal, rec.primal_value);
  int bad = 0;
  for (const IterationRecord& rec : r.trace)
    if (rec.dual_value > best_primal + tol * (1.0 + std::abs(best_primal))) ++bad;
  return bad;
}

int count_repeated_memory(const RunResult& r) {
  std::set<std::vector<int>> seen;
  int bad = 0;
  for (const IterationRecord& rec : r.trace) {
    if (rec.memory_ids.empty()) continue;
    if (!seen.insert(rec.memory_ids).second) ++bad;
  }
  return bad;
}

int count_memory_bound_violations(const RunResult& r, int bound) {
  int bad = 0;
  for (const IterationRecord& rec : r.trace)
    if (rec.memory_size > bound) ++bad;
  return bad;
}

double median_decay_ratio(const RunResult& r, double p_star) {
  std::vector<double> ratios;
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    const double den = p_star - r.trace[i - 1].dual_value;
    const double num = p_star - r.trace[i].dual_value;
    if (den > 0.0) ratios.push_back(std::max(num, 0.0) / den);
  }
  if (ratios.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = ratios.size() / 2;
  std::nth_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(mid), ratios.end());
  double med = ratios[mid];
  if (ratios.size() % 2 == 0) {
    const double lo = *std::max_element(ratios.begin(), ratios.begin() + static_cast<std::ptrdiff_t>(mid));
    med = 0.5 * (med + lo);
  }
  return med;
}

}  // namespace lkm
