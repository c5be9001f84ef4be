#include "lkm/harness/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "json.hpp"
#include "lkm/algorithms.hpp"
#include "lkm/harness/instance.hpp"
#include "lkm/oracles.hpp"

namespace lkm::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Instance random_instance(int n, std::uint64_t seed) {
  InstanceSpec spec;
  spec.n = n;
  spec.seed = seed;
  return generate_instance(spec);
}

RunOptions options(double eps, bool relative, int max_iterations) {
  RunOptions o;
  o.stop = {eps, relative, max_iterations};
  o.record_memory = true;
  return o;
}

bool fcfw_family(Method m) { return m == Method::LimitedMemoryFCFW || m == Method::FullyCorrectiveFW; }

struct Labeled {
  std::string label;
  RunResult run;
};

class Suite {
 public:
  explicit Suite(const VerifyOptions& opts, std::ostream* progress) : opts_(opts), progress_(progress) {}

  std::vector<CriterionResult> run() {
    const bool worked_only = opts_.n_max < 3;
    add(3, "worked_example", [&](std::ostream& d) { return worked_example(d); });
    if (worked_only) {
      for (int id : {1, 2, 4, 5, 8, 9, 11, 12}) skip(id);
    } else {
      add(1, "lkm_memory_bound", [&](std::ostream& d) { return lkm_memory(d); });
      add(2, "lfcfw_memory_bound", [&](std::ostream& d) { return lfcfw_memory(d); });
      add(4, "oracle_equivalence", [&](std::ostream& d) { return oracle_equivalence(d); });
      add(5, "primal_dual_trace_match", [&](std::ostream& d) { return duality(d); });
      add(8, "convergence_n100", [&](std::ostream& d) { return large_scale(d); });
      add(9, "linear_decay", [&](std::ostream& d) { return linear_decay(d); });
      add(11, "conjugate_identities", [&](std::ostream& d) { return conjugate_identities(d); });
      add(12, "greedy_correctness", [&](std::ostream& d) { return greedy_correctness(d); });
    }
    add(6, "monotone_bounds_weak_duality", [&](std::ostream& d) { return monotone(d); });
    add(7, "no_repeated_memory", [&](std::ostream& d) { return no_stall(d); });
    add(10, "complementary_slackness", [&](std::ostream& d) { return slackness(d); });
    std::sort(results_.begin(), results_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
    return results_;
  }

 private:
  static constexpr const char* kNames[] = {"",
                                           "lkm_memory_bound",
                                           "lfcfw_memory_bound",
                                           "worked_example",
                                           "oracle_equivalence",
                                           "primal_dual_trace_match",
                                           "monotone_bounds_weak_duality",
                                           "no_repeated_memory",
                                           "convergence_n100",
                                           "linear_decay",
                                           "complementary_slackness",
                                           "conjugate_identities",
                                           "greedy_correctness"};

  void add(int id, const char* name, const std::function<bool(std::ostream&)>& body) {
    CriterionResult c;
    c.id = id;
    c.name = name;
    std::ostringstream detail;
    const auto t0 = Clock::now();
    try {
      c.passed = body(detail);
    } catch (const std::exception& e) {
      c.passed = false;
      detail << "exception: " << e.what();
    }
    c.seconds = seconds_since(t0);
    c.detail = detail.str();
    if (progress_) *progress_ << format_line(c) << '\n' << std::flush;
    results_.push_back(std::move(c));
  }

  void skip(int id) {
    CriterionResult c;
    c.id = id;
    c.name = kNames[id];
    c.passed = true;
    c.skipped = true;
    c.detail = "not run for n-max < 3";
    if (progress_) *progress_ << format_line(c) << '\n' << std::flush;
    results_.push_back(std::move(c));
  }

  void keep(std::string label, RunResult r) { runs_.push_back({std::move(label), std::move(r)}); }

  // 1 and 2 share their instances.
  std::vector<std::pair<int, std::uint64_t>> memory_instances() const {
    std::vector<std::pair<int, std::uint64_t>> out;
    for (std::uint64_t s = 1; s <= 20; ++s) out.emplace_back(10, s);
    for (std::uint64_t s = 1; s <= 5; ++s) out.emplace_back(50, s);
    return out;
  }

  bool lkm_memory(std::ostream& d) {
    const auto t0 = Clock::now();
    int violations = 0, dependent = 0, unconverged = 0, runs = 0, peak = 0;
    for (auto [n, seed] : memory_instances()) {
      const Instance inst = random_instance(n, seed);
      RunResult r = run_lkm(inst.g, inst.f, options(1e-5, true, 1000));
      ++runs;
      if (r.status != RunStatus::Converged) ++unconverged;
      violations += count_memory_bound_violations(r, n + 1);
      for (const IterationRecord& rec : r.trace) {
        peak = std::max(peak, rec.memory_size - n);
        if (!rec.memory_affinely_independent) ++dependent;
      }
      keep("lkm n=" + std::to_string(n) + " seed=" + std::to_string(seed), std::move(r));
    }
    const double secs = seconds_since(t0);
    d << runs << " runs, bound violations " << violations << ", dependent memories " << dependent
      << ", unconverged " << unconverged << ", max |V|-n " << peak << ", " << secs << " s";
    return violations == 0 && dependent == 0 && unconverged == 0 && secs < 10.0;
  }

  bool lfcfw_memory(std::ostream& d) {
    int mem_violations = 0, support_violations = 0, unconverged = 0, runs = 0;
    for (auto [n, seed] : memory_instances()) {
      const Instance inst = random_instance(n, seed);
      RunOptions o = options(1e-5, true, 1000);
      o.support_rule = opts_.inject_fault ? SupportRule::FullMemory : SupportRule::MinimalSupport;
      RunResult r = run_lfcfw(inst.g, inst.f, o);
      ++runs;
      if (r.status != RunStatus::Converged) ++unconverged;
      mem_violations += count_memory_bound_violations(r, n + 2);
      for (const IterationRecord& rec : r.trace)
        if (rec.active_size > n + 1) ++support_violations;
      keep("lfcfw n=" + std::to_string(n) + " seed=" + std::to_string(seed), std::move(r));
    }
    d << runs << " runs" << (opts_.inject_fault ? " (fault injected: no pruning)" : "") << ", |V|>n+2 at "
      << mem_violations << " iterations, |B|>n+1 at " << support_violations << ", unconverged " << unconverged;
    return mem_violations == 0 && support_violations == 0 && unconverged == 0;
  }

  bool worked_example(std::ostream& d) {
    const SubmodularFunction f = SubmodularFunction::permutahedron(2);
    const QuadraticObjective g = QuadraticObjective::identity(2);
    bool ok = true;
    for (Method m : {Method::LimitedMemoryKelley, Method::OriginalSimplicial, Method::LimitedMemoryFCFW,
                     Method::FullyCorrectiveFW}) {
      RunResult r = run_method(m, g, f, options(0.0, false, 50));
      const IterationRecord& last = r.trace.back();
      const bool good = r.status == RunStatus::Converged && r.iterations() == 2 &&
                        std::abs(last.primal_value + 2.25) <= 1e-10 && std::abs(last.dual_value + 2.25) <= 1e-10;
      d << method_name(m) << ": " << r.iterations() << " it, p=" << last.primal_value << " d=" << last.dual_value
        << (good ? "" : " MISMATCH") << "; ";
      ok = ok && good;
      keep(std::string(method_name(m)) + " worked example", std::move(r));
    }
    return ok;
  }

  bool oracle_equivalence(std::ostream& d) {
    const auto t0 = Clock::now();
    const int n_top = std::min(opts_.n_max, 6);
    double worst = 0.0;
    int bad = 0, count = 0;
    for (int n = 2; n <= n_top; ++n) {
      for (int s = 1; s <= opts_.seeds; ++s) {
        const Instance inst = random_instance(n, static_cast<std::uint64_t>(s));
        RunResult r = run_lkm(inst.g, inst.f, options(1e-12, true, 1000));
        const OracleSolution o = oracle_full_vertex(inst.g, inst.f);
        const double dev = std::abs(r.trace.back().primal_value - o.p_star) / (1.0 + std::abs(o.p_star));
        worst = std::max(worst, dev);
        if (!(dev <= 1e-6) || r.status != RunStatus::Converged) ++bad;
        ++count;
        keep("lkm oracle n=" + std::to_string(n) + " seed=" + std::to_string(s), std::move(r));
      }
    }
    const double secs = seconds_since(t0);
    d << count << " instances (n=2.." << n_top << "), worst relative deviation " << worst << ", failures " << bad
      << ", " << secs << " s";
    return bad == 0 && secs < 30.0;
  }

  bool duality(std::ostream& d) {
    double x_dev = 0.0, gap_dev = 0.0, offset = 0.0;
    int mismatches = 0, iteration_diffs = 0;
    for (std::uint64_t s = 1; s <= 10; ++s) {
      const Instance inst = random_instance(20, s);
      const StoppingRule stop{1e-6, true, 1000};
      RunOptions o = options(stop.epsilon, stop.relative, stop.max_iterations);
      RunResult lkm_run = run_lkm(inst.g, inst.f, o);
      o.support_rule = SupportRule::ActiveSet;
      RunResult lf_run = run_lfcfw(inst.g, inst.f, o);
      RunResult osm_run = run_osm(inst.g, inst.f, o);
      o.support_rule = SupportRule::FullMemory;
      RunResult fc_run = run_lfcfw(inst.g, inst.f, o);
      for (const PairDeviation& p : {compare_runs(lkm_run, lf_run), compare_runs(osm_run, fc_run)}) {
        x_dev = std::max(x_dev, p.max_x_deviation);
        gap_dev = std::max(gap_dev, p.max_gap_deviation);
        offset = std::max(offset, p.max_bound_offset);
        mismatches += p.memory_mismatches;
        if (p.iterations_a != p.iterations_b || !p.same_status) ++iteration_diffs;
      }
      const std::string tag = " n=20 seed=" + std::to_string(s);
      keep("lkm" + tag, std::move(lkm_run));
      keep("lfcfw-active" + tag, std::move(lf_run));
      keep("osm" + tag, std::move(osm_run));
      keep("fcfw" + tag, std::move(fc_run));
    }
    d << "max |dx|_inf " << x_dev << ", max relative gap deviation " << gap_dev << ", memory mismatches "
      << mismatches << ", length/status differences " << iteration_diffs << ", max |d offset| " << offset
      << " (reported only)";
    return x_dev <= 1e-6 && gap_dev <= 1e-8 && mismatches == 0 && iteration_diffs == 0;
  }

  bool large_scale(std::ostream& d) {
    bool ok = true;
    for (std::uint64_t s = 1; s <= 3; ++s) {
      const Instance inst = random_instance(100, s);
      for (Method m : {Method::LimitedMemoryKelley, Method::OriginalSimplicial, Method::LimitedMemoryFCFW,
                       Method::FullyCorrectiveFW}) {
        RunResult r = run_method(m, inst.g, inst.f, options(1e-5, true, 500));
        const double ms = r.trace.empty() ? 0.0 : r.trace.back().cum_time_ms;
        bool good = r.status == RunStatus::Converged && ms < 60000.0;
        int peak = 0;
        for (const IterationRecord& rec : r.trace) {
          peak = std::max(peak, rec.memory_size);
          if (m == Method::OriginalSimplicial && rec.memory_size != rec.iter + 1) good = false;
        }
        if (m == Method::LimitedMemoryKelley && peak > 101) good = false;
        d << "seed " << s << ' ' << method_name(m) << ": " << r.iterations() << " it, max |V| " << peak << ", "
          << std::lround(ms) << " ms" << (good ? "" : " FAIL") << "; ";
        ok = ok && good;
        if (m == Method::LimitedMemoryKelley) large_seeds_.push_back(s);
        large_.push_back({std::string(method_name(m)) + " n=100 seed=" + std::to_string(s), r});
        keep(large_.back().label, std::move(r));
      }
    }
    return ok;
  }

  bool linear_decay(std::ostream& d) {
    if (large_.empty()) {
      d << "no large-scale runs available";
      return false;
    }
    bool ok = true;
    for (std::size_t base = 0; base < large_.size(); base += 4) {
      // Reference optimum from a much tighter run on the same instance.
      const Instance inst = random_instance(100, large_seeds_[base / 4]);
      const RunResult ref = run_lkm(inst.g, inst.f, options(1e-13, true, 5000));
      const double p_star = ref.trace.back().primal_value;
      d << "seed " << large_seeds_[base / 4] << " reference p* " << p_star << " (gap " << ref.trace.back().gap
        << "); ";
      for (std::size_t k = base; k < base + 4 && k < large_.size(); ++k) {
        const RunResult& r = large_[k].run;
        const double med = median_decay_ratio(r, p_star);
        const double subopt = (p_star - r.trace.back().dual_value) / (p_star - r.trace.front().dual_value);
        const double gap_shrink = r.trace.back().gap / r.trace.front().gap;
        const bool good = med < 1.0 && subopt < 1e-5;
        d << large_[k].label << ": median ratio " << med << ", (p*-d) final/initial " << subopt
          << ", (p-d) final/initial " << gap_shrink << (good ? "" : " FAIL") << "; ";
        ok = ok && good;
      }
    }
    large_.clear();
    return ok;
  }

  bool monotone(std::ostream& d) {
    int lb = 0, wd = 0;
    std::string first;
    for (const Labeled& l : runs_) {
      const int a = count_lower_bound_violations(l.run, 1e-9, 1e-12);
      const int b = count_weak_duality_violations(l.run, 1e-9);
      if ((a || b) && first.empty()) first = l.label;
      lb += a;
      wd += b;
    }
    d << runs_.size() << " runs, lower-bound violations " << lb << ", weak-duality violations " << wd;
    if (!first.empty()) d << ", first offender: " << first;
    return lb == 0 && wd == 0;
  }

  bool no_stall(std::ostream& d) {
    int repeats = 0;
    std::string first;
    for (const Labeled& l : runs_) {
      const int r = count_repeated_memory(l.run);
      if (r && first.empty()) first = l.label;
      repeats += r;
    }
    d << runs_.size() << " runs, repeated memory sets " << repeats;
    if (!first.empty()) d << ", first offender: " << first;
    return repeats == 0;
  }

  bool slackness(std::ostream& d) {
    int away = 0, outside = 0, iterates = 0;
    double worst = 0.0;
    for (const Labeled& l : runs_) {
      if (!fcfw_family(l.run.method)) continue;
      for (const IterationRecord& rec : l.run.trace) {
        ++iterates;
        worst = std::max(worst, rec.away_gap / rec.away_gap_scale);
        if (rec.away_gap > 1e-8 * rec.away_gap_scale) ++away;
        if (!rec.support_in_active) ++outside;
      }
    }
    d << iterates << " L-FCFW iterates, away-gap violations " << away << " (worst scaled " << worst
      << "), support outside active set " << outside;
    return iterates > 0 && away == 0 && outside == 0;
  }

  bool conjugate_identities(std::ostream& d) {
    std::mt19937_64 rng(20240601);
    auto unif = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng()); };
    auto random_vector = [&](int n, double scale) {
      Vector v(n);
      for (int i = 0; i < n; ++i) v[i] = unif(-scale, scale);
      return v;
    };

    struct Case {
      std::string name;
      QuadraticObjective g;
    };
    std::vector<Case> cases;
    cases.push_back({"identity n=5", QuadraticObjective::identity(5)});
    cases.push_back({"random n=5", random_instance(5, 11).g});
    cases.push_back({"random n=20", random_instance(20, 12).g});
    {
      const int n = 8;
      Matrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = unif(-1.0, 1.0);
      Vector b = random_vector(n, 2.0);
      cases.push_back({"random SPD n=8", QuadraticObjective(m.transpose() * m + 0.05 * Matrix::Identity(n, n), b)});
    }

    int fy = 0, inv = 0, lip = 0, pfd = 0;
    for (const Case& c : cases) {
      const QuadraticObjective& g = c.g;
      const int n = g.dimension();
      const double a = g.strong_convexity();
      const SubmodularFunction f = SubmodularFunction::permutahedron(n);
      for (int k = 0; k < 100; ++k) {
        const Vector x = random_vector(n, 10.0);
        const Vector w = g.gradient(x);
        const double wx = w.dot(x);
        if (std::abs(g.value(x) + g.conjugate_value(w) - wx) > 1e-10 * (1.0 + std::abs(wx))) ++fy;
        const Vector y = random_vector(n, 10.0);
        if ((g.conjugate_gradient(w) - x).cwiseAbs().maxCoeff() > 1e-8) ++inv;
        if ((g.gradient(g.conjugate_gradient(y)) - y).cwiseAbs().maxCoeff() > 1e-8) ++inv;
        const Vector y2 = random_vector(n, 10.0);
        const double lhs = (g.conjugate_gradient(y) - g.conjugate_gradient(y2)).norm();
        if (lhs > (y - y2).norm() / a * (1.0 + 1e-9)) ++lip;
        // Random pair in B(F): convex combinations of greedy vertices.
        auto base_point = [&]() {
          Vector acc = Vector::Zero(n);
          double total = 0.0;
          for (int t = 0; t < 3; ++t) {
            const double wt = unif(0.1, 1.0);
            acc += wt * greedy_vertex(f, random_vector(n, 1.0)).vertex;
            total += wt;
          }
          return Vector(acc / total);
        };
        const PrimalFromDualBound bnd = primal_from_dual_bound_check(g, f, base_point(), base_point());
        if (bnd.lhs > bnd.rhs * (1.0 + 1e-9)) ++pfd;
      }
    }
    d << cases.size() << " objective classes x 100 points; Fenchel-Young failures " << fy << ", inverse-map failures "
      << inv << ", Lipschitz failures " << lip << ", primal-from-dual failures " << pfd;
    return fy == 0 && inv == 0 && lip == 0 && pfd == 0;
  }

  bool greedy_correctness(std::ostream& d) {
    std::mt19937_64 rng(777);
    auto unif = [&](double lo, double hi) { return lo + (hi - lo) * unit_uniform(rng()); };
    int bad = 0, checks = 0;
    double worst = 0.0;
    for (int n = 1; n <= 7; ++n) {
      std::vector<double> h(static_cast<std::size_t>(n));
      for (double& v : h) v = unif(-3.0, 3.0);
      std::vector<double> weights(static_cast<std::size_t>(n));
      for (double& v : weights) v = unif(0.5, 2.0);
      std::vector<double> table(std::size_t{1} << n);
      for (std::size_t mask = 0; mask < table.size(); ++mask) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          if (mask >> i & 1U) s += weights[static_cast<std::size_t>(i)];
        table[mask] = std::sqrt(s) - 0.3 * std::popcount(mask);
      }
      const std::vector<SubmodularFunction> families = {
          SubmodularFunction::permutahedron(n), SubmodularFunction::cardinality_truncation(n, std::max(1, n / 2)),
          SubmodularFunction::maximal_element(h), SubmodularFunction::explicit_table(n, table)};
      for (const SubmodularFunction& f : families) {
        const std::vector<Vector> verts = enumerate_vertices(f);
        for (int k = 0; k < 100; ++k) {
          Vector x(n);
          // Every other point has integer entries so ties are exercised.
          for (int i = 0; i < n; ++i) x[i] = (k % 2) ? std::round(unif(-2.5, 2.5)) : unif(-5.0, 5.0);
          double best = -std::numeric_limits<double>::infinity();
          for (const Vector& v : verts) best = std::max(best, dot(v, x));
          const double got = greedy_vertex(f, x).value;
          const double err = std::abs(got - best);
          worst = std::max(worst, err);
          if (err > 1e-12 * (1.0 + std::abs(best))) ++bad;
          ++checks;
        }
      }
    }
    d << checks << " checks over 4 families, n=1..7; failures " << bad << ", worst error " << worst;
    return bad == 0;
  }

  VerifyOptions opts_;
  std::ostream* progress_;
  std::vector<CriterionResult> results_;
  std::vector<Labeled> runs_;
  std::vector<Labeled> large_;
  std::vector<std::uint64_t> large_seeds_;
};

}  // namespace

std::vector<CriterionResult> run_acceptance(const VerifyOptions& opts, std::ostream* progress) {
  return Suite(opts, progress).run();
}

std::string format_line(const CriterionResult& c) {
  std::ostringstream o;
  o << "criterion " << c.id << ' ' << c.name << ": " << (c.skipped ? "SKIP" : c.passed ? "PASS" : "FAIL") << " ["
    << std::fixed;
  o.precision(2);
  o << c.seconds << " s] ";
  o.unsetf(std::ios::fixed);
  o.precision(6);
  o << c.detail;
  return o.str();
}

std::string results_json(const std::vector<CriterionResult>& results) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CriterionResult& c : results)
    arr.push_back({{"id", c.id},
                   {"name", c.name},
                   {"status", c.skipped ? "skip" : c.passed ? "pass" : "fail"},
                   {"seconds", c.seconds},
                   {"detail", c.detail}});
  return nlohmann::json{{"criteria", arr}, {"all_passed", all_passed(results)}}.dump(2);
}

bool all_passed(const std::vector<CriterionResult>& results) {
  return std::all_of(results.begin(), results.end(), [](const CriterionResult& c) { return c.passed; });
}

}  // namespace lkm::harness
