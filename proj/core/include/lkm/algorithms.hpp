#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "lkm/objective.hpp"
#include "lkm/subproblem.hpp"
#include "lkm/submodular.hpp"
#include "lkm/vector.hpp"

namespace lkm {

enum class Method { LimitedMemoryKelley, OriginalSimplicial, LimitedMemoryFCFW, FullyCorrectiveFW, AwayStepFW };

/// Which retained vertices a fully corrective Frank-Wolfe run keeps.
enum class SupportRule {
  MinimalSupport,  // support of the Caratheodory-pruned weights
  ActiveSet,       // v with v'x = w'x; reproduces the limited memory Kelley run
  FullMemory,      // everything; plain FCFW, reproduces the simplicial method
};

std::string_view method_name(Method m);
std::optional<Method> parse_method(std::string_view name);
std::string_view support_rule_name(SupportRule r);
std::optional<SupportRule> parse_support_rule(std::string_view name);

struct StoppingRule {
  double epsilon = 1e-8;
  bool relative = false;  // threshold epsilon (1 + |g(x) + f(x)|)
  int max_iterations = 1000;
};

enum class RunStatus { Converged, IterationCap, InnerSolverFailure };
std::string_view status_name(RunStatus s);

struct RunOptions {
  StoppingRule stop;
  SupportRule support_rule = SupportRule::MinimalSupport;  // FCFW-family only
  std::optional<VertexSet> initial_memory;                 // default {greedy(F, x0)}
  std::optional<Vector> x0;                                // default 0
  SubproblemOptions qp;
  bool record_iterates = true;  // keep x, w per iteration
  bool record_memory = false;   // keep vertex ids of V^(i-1) per iteration
};

/// One outer iteration. `p`, `d` are the method's own bounds: for the
/// Kelley-type methods p = g(x) + f(x), d = g(x) + max_{v in V} v'x; for the
/// Frank-Wolfe family p = v'x, d = w'x (taken as t = max_{v in V} v'x, which
/// equals w'x at the subproblem optimum). Both give the same gap.
/// `primal_value` = g(x) + f(x) and `dual_value` = -g*(-w) are recorded for
/// every method so bounds can be compared across them.
struct IterationRecord {
  int iter = 0;
  Vector x;
  Vector w;
  double p = 0.0;
  double d = 0.0;
  double gap = 0.0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  int subproblem_size = 0;  // |V^(i-1)|
  int memory_size = 0;      // |V^(i)| after the memory update
  int active_size = 0;      // |A^(i)| or |B^(i)|
  int inner_iterations = 0;
  double cum_time_ms = 0.0;
  double away_gap = 0.0;          // max_{v in supp lambda} (w - v)'x
  double away_gap_scale = 1.0;    // 1 + |t|
  bool support_in_active = true;  // supp(lambda) within the active set
  bool memory_affinely_independent = true;  // V^(i-1); only checked when recording memory
  std::vector<int> memory_ids;    // sorted ids of V^(i-1) into RunResult::vertices
};

/// Every distinct vertex a run touched, keyed by exact value.
class VertexRegistry {
 public:
  int intern(const Vector& v);
  const Vector& operator[](int id) const { return by_id_[static_cast<std::size_t>(id)]; }
  std::size_t size() const noexcept { return by_id_.size(); }

 private:
  struct Less {
    bool operator()(const Vector& a, const Vector& b) const;
  };
  std::map<Vector, int, Less> ids_;
  std::vector<Vector> by_id_;
};

struct RunResult {
  Method method = Method::LimitedMemoryKelley;
  RunStatus status = RunStatus::IterationCap;
  Vector x;
  Vector w;
  Vector lambda;        // weights over `memory`
  VertexSet memory;     // final V^(i)
  std::vector<IterationRecord> trace;
  VertexRegistry vertices;
  std::string message;  // failure detail, if any

  int iterations() const noexcept { return static_cast<int>(trace.size()); }
};

RunResult run_lkm(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts = {});
RunResult run_osm(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts = {});
/// Fully corrective Frank-Wolfe on max -g*(-w) over B(F). The memory rule
/// comes from `opts.support_rule`; FullMemory is vanilla FCFW.
RunResult run_lfcfw(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts = {});
/// Away-step Frank-Wolfe with exact line search, started at greedy(F, x0).
RunResult run_away_fw(const QuadraticObjective& g, const SubmodularFunction& f, const RunOptions& opts = {});

/// Dispatch by method; FullyCorrectiveFW forces SupportRule::FullMemory.
RunResult run_method(Method m, const QuadraticObjective& g, const SubmodularFunction& f, RunOptions opts = {});

struct PairDeviation {
  int iterations_a = 0;
  int iterations_b = 0;
  double max_x_deviation = 0.0;     // max_i ||x_a - x_b||_inf
  double max_gap_deviation = 0.0;   // max_i |gap_a - gap_b| / (1 + |gap_a|)
  int memory_mismatches = 0;        // iterations whose V^(i) differ as sets
  double max_bound_offset = 0.0;    // max_i |d_a - d_b|, reported only
  bool same_status = true;
};

struct DualityReport {
  PairDeviation lkm_vs_lfcfw;  // active-set rule
  PairDeviation osm_vs_fcfw;   // full-memory rule
};

/// Runs both primal/dual pairs from the same initial memory and compares
/// their traces iteration by iteration.
DualityReport crosscheck_duality(const QuadraticObjective& g, const SubmodularFunction& f,
                                 const StoppingRule& stop, const SubproblemOptions& qp = {});
PairDeviation compare_runs(const RunResult& a, const RunResult& b);

struct PrimalFromDualBound {
  double lhs;  // || grad g*(-w_approx) - grad g*(-w_star) ||
  double rhs;  // || w_approx - w_star || / strong_convexity(g)
};

PrimalFromDualBound primal_from_dual_bound_check(const QuadraticObjective& g, const SubmodularFunction& f,
                                                 const Vector& w_approx, const Vector& w_star);

/// Upper bound on the Kelley gap given the dual suboptimality p* - d and the
/// diameter M of B(F): M sqrt(2 (p*-d) / alpha) when p*-d <= M^2 / (2 alpha),
/// otherwise (p*-d) + M^2 / (2 alpha). alpha is the strong convexity of g.
double gap_bound(double dual_suboptimality, double diameter, double strong_convexity);

}  // namespace lkm
