#include "lkm/algorithms.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lkm/errors.hpp"

namespace lkm {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::LimitedMemoryKelley: return "lkm";
    case Method::OriginalSimplicial: return "osm";
    case Method::LimitedMemoryFCFW: return "lfcfw";
    case Method::FullyCorrectiveFW: return "fcfw";
    case Method::AwayStepFW: return "awayfw";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  for (Method m : {Method::LimitedMemoryKelley, Method::OriginalSimplicial, Method::LimitedMemoryFCFW,
                   Method::FullyCorrectiveFW, Method::AwayStepFW})
    if (method_name(m) == name) return m;
  return std::nullopt;
}

std::string_view support_rule_name(SupportRule r) {
  switch (r) {
    case SupportRule::MinimalSupport: return "minimal";
    case SupportRule::ActiveSet: return "active";
    case SupportRule::FullMemory: return "full";
  }
  return "unknown";
}

std::optional<SupportRule> parse_support_rule(std::string_view name) {
  for (SupportRule r : {SupportRule::MinimalSupport, SupportRule::ActiveSet, SupportRule::FullMemory})
    if (support_rule_name(r) == name) return r;
  return std::nullopt;
}

std::string_view status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::IterationCap: return "iteration_cap";
    case RunStatus::InnerSolverFailure: return "inner_solver_failure";
  }
  return "unknown";
}

bool VertexRegistry::Less::operator()(const Vector& a, const Vector& b) const {
  if (a.size() != b.size()) return a.size() < b.size();
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
}

int VertexRegistry::intern(const Vector& v) {
  auto [it, inserted] = ids_.try_emplace(v, static_cast<int>(by_id_.size()));
  if (inserted) by_id_.push_back(v);
  return it->second;
}

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

double stop_threshold(const StoppingRule& stop, double primal_value) {
  return stop.relative ? stop.epsilon * (1.0 + std::abs(primal_value)) : stop.epsilon;
}

void validate(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts) {
  if (g.dimension() != f.size()) throw InvalidInput("objective and set function dimensions differ");
  if (!(opts.stop.epsilon >= 0.0)) throw InvalidInput("stopping tolerance must be non-negative");
  if (opts.stop.max_iterations < 1) throw InvalidInput("max_iterations must be positive");
  if (opts.x0 && opts.x0->size() != f.size()) throw InvalidInput("x0 has the wrong dimension");
}

VertexSet initial_memory(const SubmodularFunction& f, const RunOptions& opts) {
  if (opts.initial_memory) {
    if (opts.initial_memory->empty()) throw InvalidInput("initial memory must be non-empty");
    if (opts.initial_memory->dimension() != f.size()) throw InvalidInput("initial memory has the wrong dimension");
    return *opts.initial_memory;
  }
  const Vector x0 = opts.x0 ? *opts.x0 : Vector::Zero(f.size());
  VertexSet v;
  v.add(greedy_vertex(f, x0).vertex, 0);
  return v;
}

std::vector<int> memory_ids(VertexRegistry& reg, const VertexSet& mem) {
  std::vector<int> ids;
  ids.reserve(mem.size());
  for (const Vector& v : mem.vertices()) ids.push_back(reg.intern(v));
  std::sort(ids.begin(), ids.end());
  return ids;
}

enum class Rule { KelleyActive, KeepAll, DualActive, PrunedSupport };

// Shared outer loop for the four fully corrective methods. They differ only
// in how bounds are reported and which vertices survive to the next round.
RunResult run_corrective(Method method, Rule rule, const QuadraticObjective& g, const SubmodularFunction& f,
                         const RunOptions& opts) {
  validate(g, f, opts);
  const bool kelley = method == Method::LimitedMemoryKelley || method == Method::OriginalSimplicial;
  const bool expect_independent = rule == Rule::KelleyActive || rule == Rule::DualActive;

  RunResult res;
  res.method = method;
  VertexSet mem = initial_memory(f, opts);
  Vector warm;
  const auto start = Clock::now();

  for (int i = 1; i <= opts.stop.max_iterations; ++i) {
    IterationRecord rec;
    rec.iter = i;
    rec.subproblem_size = static_cast<int>(mem.size());
    if (opts.record_memory) {
      rec.memory_ids = memory_ids(res.vertices, mem);
      if (expect_independent) rec.memory_affinely_independent = check_affine_independence(mem);
    }

    SubproblemSolution sol;
    try {
      sol = solve_subproblem(mem, g, opts.qp, warm);
    } catch (const ConvergenceError& e) {
      res.status = RunStatus::InnerSolverFailure;
      res.message = e.what();
      res.memory = mem;
      return res;
    }

    const Vector& x = sol.x;
    const GreedyResult gr = greedy_vertex(f, x);
    const double gx = g.value(x);
    const double wx = dot(sol.w, x);
    rec.primal_value = gx + gr.value;
    rec.dual_value = sol.dual_value;
    if (kelley) {
      rec.p = gx + gr.value;
      rec.d = gx + sol.t;
    } else {
      // w'x equals t at the subproblem optimum; t is exact when v is already in V.
      rec.p = gr.value;
      rec.d = sol.t;
    }
    rec.gap = rec.p - rec.d;

    const std::vector<int> supp = support_indices(sol.lambda, opts.qp.tol_supp);
    const std::vector<int> act = active_indices(mem, x, sol.t, opts.qp.tol_act);
    rec.support_in_active = std::includes(act.begin(), act.end(), supp.begin(), supp.end());
    rec.away_gap = -std::numeric_limits<double>::infinity();
    for (int j : supp) rec.away_gap = std::max(rec.away_gap, wx - dot(mem[j], x));
    rec.away_gap_scale = 1.0 + std::abs(sol.t);

    // Memory update.
    std::vector<int> keep;
    Vector keep_weights;
    switch (rule) {
      case Rule::KelleyActive:
        keep = act;
        break;
      case Rule::KeepAll:
        keep.resize(mem.size());
        for (std::size_t j = 0; j < mem.size(); ++j) keep[j] = static_cast<int>(j);
        break;
      case Rule::DualActive:
        keep = active_indices(mem, x, wx, opts.qp.tol_act);
        break;
      case Rule::PrunedSupport: {
        PrunedCombination pc = caratheodory_prune_indices(mem, sol.lambda);
        keep = std::move(pc.indices);
        keep_weights = std::move(pc.weights);
        break;
      }
    }
    if (keep_weights.size() == 0) {
      keep_weights.resize(static_cast<Eigen::Index>(keep.size()));
      for (std::size_t a = 0; a < keep.size(); ++a) keep_weights[static_cast<Eigen::Index>(a)] = sol.lambda[keep[a]];
    }
    VertexSet next = mem.subset(keep);
    const bool added = next.add(gr.vertex, i);
    Vector next_warm(static_cast<Eigen::Index>(next.size()));
    next_warm.head(keep_weights.size()) = keep_weights;
    if (added) next_warm[next_warm.size() - 1] = 0.0;

    rec.active_size = static_cast<int>(keep.size());
    rec.memory_size = static_cast<int>(next.size());
    rec.inner_iterations = sol.iterations;
    if (opts.record_iterates) {
      rec.x = x;
      rec.w = sol.w;
    }
    rec.cum_time_ms = elapsed_ms(start);
    const double gap = rec.gap;
    const double thr = stop_threshold(opts.stop, rec.primal_value);
    res.trace.push_back(std::move(rec));

    res.x = x;
    res.w = sol.w;
    res.lambda = sol.lambda;
    res.memory = mem;
    if (gap <= thr) {
      res.status = RunStatus::Converged;
      return res;
    }
    mem = std::move(next);
    warm = std::move(next_warm);
  }
  res.status = RunStatus::IterationCap;
  return res;
}

}  // namespace

RunResult run_lkm(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts) {
  return run_corrective(Method::LimitedMemoryKelley, Rule::KelleyActive, g, f, opts);
}

RunResult run_osm(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts) {
  return run_corrective(Method::OriginalSimplicial, Rule::KeepAll, g, f, opts);
}

RunResult run_lfcfw(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts) {
  switch (opts.support_rule) {
    case SupportRule::MinimalSupport:
      return run_corrective(Method::LimitedMemoryFCFW, Rule::PrunedSupport, g, f, opts);
    case SupportRule::ActiveSet:
      return run_corrective(Method::LimitedMemoryFCFW, Rule::DualActive, g, f, opts);
    case SupportRule::FullMemory:
      return run_corrective(Method::FullyCorrectiveFW, Rule::KeepAll, g, f, opts);
  }
  throw InvalidInput("unknown support rule");
}

RunResult run_away_fw(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts) {
  validate(g, f, opts);
  RunResult res;
  res.method = Method::AwayStepFW;

  VertexSet atoms = initial_memory(f, opts);
  std::vector<double> weights(atoms.size(), 1.0 / static_cast<double>(atoms.size()));
  const auto start = Clock::now();

  for (int i = 1; i <= opts.stop.max_iterations; ++i) {
    Vector w = Vector::Zero(f.size());
    for (std::size_t a = 0; a < atoms.size(); ++a) w += weights[a] * atoms[a];
    const Vector x = g.conjugate_gradient(-w);
    const GreedyResult gr = greedy_vertex(f, x);

    IterationRecord rec;
    rec.iter = i;
    rec.subproblem_size = static_cast<int>(atoms.size());
    if (opts.record_memory) rec.memory_ids = memory_ids(res.vertices, atoms);
    const double wx = dot(w, x);
    rec.p = gr.value;
    rec.d = wx;
    rec.gap = rec.p - rec.d;
    rec.primal_value = g.value(x) + gr.value;
    rec.dual_value = -g.conjugate_value(-w);

    std::size_t away = 0;
    double away_score = std::numeric_limits<double>::infinity();
    double t = -std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
      const double s = dot(atoms[a], x);
      t = std::max(t, s);
      if (s < away_score) {
        away_score = s;
        away = a;
      }
    }
    rec.away_gap = wx - away_score;
    rec.away_gap_scale = 1.0 + std::abs(t);

    const double thr = stop_threshold(opts.stop, rec.primal_value);
    res.x = x;
    res.w = w;
    res.memory = atoms;
    res.lambda = Eigen::Map<const Vector>(weights.data(), static_cast<Eigen::Index>(weights.size()));
    if (rec.gap <= thr) {
      rec.active_size = rec.memory_size = static_cast<int>(atoms.size());
      rec.cum_time_ms = elapsed_ms(start);
      if (opts.record_iterates) {
        rec.x = x;
        rec.w = w;
      }
      res.trace.push_back(std::move(rec));
      res.status = RunStatus::Converged;
      return res;
    }

    Vector dir;
    double gamma_max;
    const bool fw_step = rec.gap >= rec.away_gap;
    if (fw_step) {
      dir = gr.vertex - w;
      gamma_max = 1.0;
    } else {
      dir = w - atoms[away];
      gamma_max = weights[away] / (1.0 - weights[away]);
    }
    const double slope = dot(x, dir);
    const double curvature = dot(dir, g.solve(dir));
    const double gamma = curvature > 0.0 ? std::clamp(slope / curvature, 0.0, gamma_max) : gamma_max;

    if (fw_step) {
      for (double& l : weights) l *= (1.0 - gamma);
      int idx = atoms.find(gr.vertex);
      if (idx < 0) {
        atoms.add(gr.vertex, i);
        weights.push_back(0.0);
        idx = static_cast<int>(atoms.size()) - 1;
      }
      weights[static_cast<std::size_t>(idx)] += gamma;
    } else {
      for (double& l : weights) l *= (1.0 + gamma);
      weights[away] -= gamma;
      if (gamma >= gamma_max) weights[away] = 0.0;
    }

    std::vector<int> keep;
    for (std::size_t a = 0; a < atoms.size(); ++a)
      if (weights[a] > 1e-15) keep.push_back(static_cast<int>(a));
    VertexSet kept = atoms.subset(keep);
    std::vector<double> kept_w;
    double total = 0.0;
    for (int a : keep) total += weights[static_cast<std::size_t>(a)];
    for (int a : keep) kept_w.push_back(weights[static_cast<std::size_t>(a)] / total);
    atoms = std::move(kept);
    weights = std::move(kept_w);

    rec.active_size = rec.memory_size = static_cast<int>(atoms.size());
    rec.inner_iterations = 1;
    rec.cum_time_ms = elapsed_ms(start);
    if (opts.record_iterates) {
      rec.x = x;
      rec.w = w;
    }
    res.trace.push_back(std::move(rec));
  }
  res.status = RunStatus::IterationCap;
  return res;
}

RunResult run_method(Method m, const QuadraticObjective& g, const SubmodularFunction& f, RunOptions opts) {
  switch (m) {
    case Method::LimitedMemoryKelley: return run_lkm(g, f, opts);
    case Method::OriginalSimplicial: return run_osm(g, f, opts);
    case Method::LimitedMemoryFCFW: return run_lfcfw(g, f, opts);
    case Method::FullyCorrectiveFW:
      opts.support_rule = SupportRule::FullMemory;
      return run_lfcfw(g, f, opts);
    case Method::AwayStepFW: return run_away_fw(g, f, opts);
  }
  throw InvalidInput("unknown method");
}

namespace {

std::vector<Vector> sorted_memory(const RunResult& r, const IterationRecord& rec) {
  std::vector<Vector> out;
  for (int id : rec.memory_ids) out.push_back(r.vertices[id]);
  std::sort(out.begin(), out.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  return out;
}

}  // namespace

PairDeviation compare_runs(const RunResult& a, const RunResult& b) {
  PairDeviation dev;
  dev.iterations_a = a.iterations();
  dev.iterations_b = b.iterations();
  dev.same_status = a.status == b.status;
  const int common = std::min(dev.iterations_a, dev.iterations_b);
  dev.memory_mismatches = std::abs(dev.iterations_a - dev.iterations_b);
  for (int i = 0; i < common; ++i) {
    const IterationRecord& ra = a.trace[static_cast<std::size_t>(i)];
    const IterationRecord& rb = b.trace[static_cast<std::size_t>(i)];
    if (ra.x.size() > 0 && rb.x.size() > 0)
      dev.max_x_deviation = std::max(dev.max_x_deviation, (ra.x - rb.x).cwiseAbs().maxCoeff());
    dev.max_gap_deviation = std::max(dev.max_gap_deviation, std::abs(ra.gap - rb.gap) / (1.0 + std::abs(ra.gap)));
    dev.max_bound_offset = std::max(dev.max_bound_offset, std::abs(ra.d - rb.d));
    const bool same_size = ra.memory_size == rb.memory_size;
    if (!same_size || sorted_memory(a, ra) != sorted_memory(b, rb)) ++dev.memory_mismatches;
  }
  return dev;
}

DualityReport crosscheck_duality(const QuadraticObjective& g, const SubmodularFunction& f, const StoppingRule& stop,
                                 const SubproblemOptions& qp) {
  RunOptions o;
  o.stop = stop;
  o.qp = qp;
  o.record_memory = true;

  DualityReport rep;
  {
    const RunResult primal = run_lkm(g, f, o);
    o.support_rule = SupportRule::ActiveSet;
    const RunResult dual = run_lfcfw(g, f, o);
    rep.lkm_vs_lfcfw = compare_runs(primal, dual);
  }
  {
    const RunResult primal = run_osm(g, f, o);
    o.support_rule = SupportRule::FullMemory;
    const RunResult dual = run_lfcfw(g, f, o);
    rep.osm_vs_fcfw = compare_runs(primal, dual);
  }
  return rep;
}

PrimalFromDualBound primal_from_dual_bound_check(const QuadraticObjective& g, const SubmodularFunction& f,
                                                 const Vector& w_approx, const Vector& w_star) {
  if (w_approx.size() != f.size() || w_star.size() != f.size())
    throw InvalidInput("primal-from-dual: dimension mismatch");
  if (f.size() <= SubmodularFunction::kMaxTableSize) {
    if (!check_membership(f, w_approx, 1e-9) || !check_membership(f, w_star, 1e-9))
      throw InvalidInput("primal-from-dual: points must lie in the base polytope");
  }
  PrimalFromDualBound out;
  out.lhs = (g.conjugate_gradient(-w_approx) - g.conjugate_gradient(-w_star)).norm();
  out.rhs = (w_approx - w_star).norm() / g.strong_convexity();
  return out;
}

double gap_bound(double dual_suboptimality, double diameter, double strong_convexity) {
  const double s = std::max(0.0, dual_suboptimality);
  const double knee = diameter * diameter / (2.0 * strong_convexity);
  if (s <= knee) return diameter * std::sqrt(2.0 * s / strong_convexity);
  return s + knee;
}

}  // namespace lkm
