#include <random>
#include <set>

#include "doctest.h"
#include "lkm/algorithms.hpp"
#include "lkm/errors.hpp"
#include "lkm/harness/instance.hpp"
#include "lkm/oracles.hpp"
#include "support.hpp"

using namespace lkm;

namespace {

Vector v2(double a, double b) { return (Vector(2) << a, b).finished(); }

RunOptions exact(int cap = 50) {
  RunOptions o;
  o.stop = {0.0, false, cap};
  o.record_memory = true;
  return o;
}

harness::Instance random_instance(int n, std::uint64_t seed) {
  harness::InstanceSpec s;
  s.n = n;
  s.seed = seed;
  return harness::generate_instance(s);
}

}  // namespace

TEST_CASE("worked example: limited memory Kelley") {
  const auto f = SubmodularFunction::permutahedron(2);
  const auto g = QuadraticObjective::identity(2);
  const RunResult r = run_lkm(g, f, exact());
  REQUIRE(r.iterations() == 2);
  CHECK(r.status == RunStatus::Converged);
  const IterationRecord& a = r.trace[0];
  CHECK(a.x.isApprox(v2(-2, -1)));
  CHECK(a.p == doctest::Approx(-1.5));
  CHECK(a.d == doctest::Approx(-2.5));
  CHECK(a.subproblem_size == 1);
  const IterationRecord& b = r.trace[1];
  CHECK(b.x.isApprox(v2(-1.5, -1.5)));
  CHECK(std::abs(b.p + 2.25) <= 1e-10);
  CHECK(std::abs(b.d + 2.25) <= 1e-10);
  CHECK(b.gap <= 0.0);
  CHECK(r.memory.contains(v2(1, 2)));
}

TEST_CASE("worked example: simplicial method and the Frank-Wolfe family") {
  const auto f = SubmodularFunction::permutahedron(2);
  const auto g = QuadraticObjective::identity(2);
  const RunResult lkm_run = run_lkm(g, f, exact());
  const RunResult osm = run_osm(g, f, exact());
  REQUIRE(osm.iterations() == 2);
  for (int i = 0; i < 2; ++i) {
    CHECK(osm.trace[i].x.isApprox(lkm_run.trace[i].x));
    CHECK(osm.trace[i].gap == doctest::Approx(lkm_run.trace[i].gap));
  }

  for (SupportRule rule : {SupportRule::MinimalSupport, SupportRule::ActiveSet, SupportRule::FullMemory}) {
    RunOptions o = exact();
    o.support_rule = rule;
    const RunResult r = run_lfcfw(g, f, o);
    REQUIRE(r.iterations() == 2);
    CHECK(r.trace[0].w == v2(2, 1));
    CHECK(r.trace[0].x.isApprox(v2(-2, -1)));
    CHECK(r.trace[1].w.isApprox(v2(1.5, 1.5)));
    CHECK(r.trace[1].gap <= 0.0);
    CHECK(std::abs(r.trace[1].primal_value + 2.25) <= 1e-10);
    CHECK(std::abs(r.trace[1].dual_value + 2.25) <= 1e-10);
  }

  const RunResult away = run_away_fw(g, f, exact());
  REQUIRE(away.iterations() == 2);
  CHECK(away.trace[1].w.isApprox(v2(1.5, 1.5)));
  CHECK(away.trace[1].gap <= 1e-15);
  CHECK(away.status == RunStatus::Converged);
}

TEST_CASE("modular functions stop at the first iteration") {
  std::mt19937_64 rng(4);
  const auto f = SubmodularFunction::cardinality_truncation(4, 4);
  const auto g = testing::random_spd(rng, 4, 0.5);
  for (Method m : {Method::LimitedMemoryKelley, Method::OriginalSimplicial, Method::LimitedMemoryFCFW,
                   Method::FullyCorrectiveFW, Method::AwayStepFW}) {
    const RunResult r = run_method(m, g, f, exact());
    CHECK(r.iterations() == 1);
    CHECK(r.status == RunStatus::Converged);
    CHECK(r.w.isApprox(Vector::Ones(4)));
  }
  const DualityReport rep = crosscheck_duality(g, f, {0.0, false, 10});
  CHECK(rep.lkm_vs_lfcfw.iterations_a == 1);
  CHECK(rep.lkm_vs_lfcfw.iterations_b == 1);
  CHECK(rep.lkm_vs_lfcfw.max_x_deviation == 0.0);
}

TEST_CASE("worked example duality cross-check") {
  const DualityReport rep =
      crosscheck_duality(QuadraticObjective::identity(2), SubmodularFunction::permutahedron(2), {0.0, false, 10});
  for (const PairDeviation& p : {rep.lkm_vs_lfcfw, rep.osm_vs_fcfw}) {
    CHECK(p.iterations_a == 2);
    CHECK(p.iterations_b == 2);
    CHECK(p.max_x_deviation == 0.0);
    CHECK(p.max_gap_deviation <= 1e-12);
    CHECK(p.memory_mismatches == 0);
    CHECK(p.same_status);
  }
}

TEST_CASE("run invariants on random instances") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const int n = seed <= 3 ? 10 : 25;
    const auto in = random_instance(n, seed);
    RunOptions o;
    o.stop = {1e-6, true, 1000};
    o.record_memory = true;

    const RunResult lkm_run = run_lkm(in.g, in.f, o);
    CHECK(lkm_run.status == RunStatus::Converged);
    CHECK(count_memory_bound_violations(lkm_run, n + 1) == 0);
    CHECK(count_lower_bound_violations(lkm_run, 1e-9, 1e-12) == 0);
    CHECK(count_weak_duality_violations(lkm_run) == 0);
    CHECK(count_repeated_memory(lkm_run) == 0);
    for (const IterationRecord& rec : lkm_run.trace) {
      CHECK(rec.memory_affinely_independent);
      CHECK(rec.d <= rec.p + 1e-9 * (1 + std::abs(rec.p)));
    }

    const RunResult osm = run_osm(in.g, in.f, o);
    for (const IterationRecord& rec : osm.trace) CHECK(rec.memory_size == rec.iter + 1);

    const RunResult lf = run_lfcfw(in.g, in.f, o);
    CHECK(count_memory_bound_violations(lf, n + 2) == 0);
    for (const IterationRecord& rec : lf.trace) {
      CHECK(rec.active_size <= n + 1);
      CHECK(rec.away_gap <= 1e-8 * rec.away_gap_scale);
      CHECK(rec.support_in_active);
    }
    CHECK(lf.trace.back().primal_value == doctest::Approx(lkm_run.trace.back().primal_value).epsilon(1e-5));
  }
}

TEST_CASE("gap bridge bound on small instances") {
  int checked = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const int n = 3 + static_cast<int>(seed % 3);
    const auto in = random_instance(n, seed);
    const OracleSolution o = oracle_full_vertex(in.g, in.f);
    const double m = diameter(in.f);
    const RunResult r = run_lkm(in.g, in.f, exact(200));
    for (const IterationRecord& rec : r.trace) {
      const double sub = std::max(0.0, o.p_star - rec.d);
      if (sub > m * m / (2 * in.g.strong_convexity())) continue;
      CHECK(rec.gap <= gap_bound(sub, m, in.g.strong_convexity()) * (1 + 1e-6) + 1e-9);
      ++checked;
    }
  }
  CHECK(checked > 4);
}

TEST_CASE("primal from dual bound") {
  const auto f = SubmodularFunction::permutahedron(2);
  const auto g = QuadraticObjective::identity(2);
  const Vector w = v2(1.5, 1.5);
  auto b = primal_from_dual_bound_check(g, f, w, w);
  CHECK(b.lhs == 0.0);
  CHECK(b.rhs == 0.0);
  b = primal_from_dual_bound_check(g, f, v2(2, 1), w);
  CHECK(b.lhs == doctest::Approx(b.rhs));
  CHECK_THROWS_AS(primal_from_dual_bound_check(g, f, v2(3, 0), w), InvalidInput);

  std::mt19937_64 rng(12);
  const int n = 5;
  const auto f5 = SubmodularFunction::permutahedron(n);
  for (int k = 0; k < 100; ++k) {
    const auto gk = testing::random_spd(rng, n, 0.05 + 0.01 * k);
    auto point = [&] {
      const double t = std::uniform_real_distribution<double>(0, 1)(rng);
      return Vector(t * greedy_vertex(f5, testing::random_vector(rng, n, -1, 1)).vertex +
                    (1 - t) * greedy_vertex(f5, testing::random_vector(rng, n, -1, 1)).vertex);
    };
    const auto r = primal_from_dual_bound_check(gk, f5, point(), point());
    CHECK(r.lhs <= r.rhs * (1 + 1e-9));
  }
}

TEST_CASE("gap bound shape") {
  CHECK(gap_bound(0.0, 2.0, 1.0) == 0.0);
  CHECK(gap_bound(0.5, 2.0, 1.0) == doctest::Approx(2.0));
  CHECK(gap_bound(3.0, 2.0, 1.0) == doctest::Approx(5.0));
}

TEST_CASE("options and failures") {
  const auto f = SubmodularFunction::permutahedron(3);
  const auto g = QuadraticObjective::identity(2);
  CHECK_THROWS_AS(run_lkm(g, f), InvalidInput);
  const auto g3 = QuadraticObjective::identity(3);
  RunOptions o;
  o.stop.max_iterations = 0;
  CHECK_THROWS_AS(run_lkm(g3, f, o), InvalidInput);
  o = RunOptions{};
  o.initial_memory = VertexSet();
  CHECK_THROWS_AS(run_osm(g3, f, o), InvalidInput);

  o = RunOptions{};
  o.stop = {0.0, false, 1};
  const RunResult capped = run_lkm(random_instance(8, 2).g, SubmodularFunction::permutahedron(8), o);
  CHECK(capped.status == RunStatus::IterationCap);
  CHECK(capped.iterations() == 1);

  // A starved inner solver surfaces as a failure with the partial trace.
  o = RunOptions{};
  o.qp.max_iterations = 1;
  const RunResult failed = run_osm(random_instance(8, 2).g, SubmodularFunction::permutahedron(8), o);
  CHECK(failed.status == RunStatus::InnerSolverFailure);
  CHECK_FALSE(failed.message.empty());

  CHECK(parse_method("fcfw") == Method::FullyCorrectiveFW);
  CHECK_FALSE(parse_method("nope").has_value());
  CHECK(parse_support_rule("active") == SupportRule::ActiveSet);
}

TEST_CASE("custom initial memory and start point") {
  const auto f = SubmodularFunction::permutahedron(2);
  const auto g = QuadraticObjective::identity(2);
  RunOptions o = exact();
  o.initial_memory = VertexSet({v2(2, 1), v2(1, 2)});
  const RunResult r = run_lkm(g, f, o);
  CHECK(r.iterations() == 1);
  CHECK(r.trace[0].x.isApprox(v2(-1.5, -1.5)));

  o = exact();
  o.x0 = v2(0, 1);
  const RunResult s = run_lkm(g, f, o);
  CHECK(s.trace[0].w == v2(1, 2));
}

TEST_CASE("away-step Frank-Wolfe reaches the same optimum") {
  const auto in = random_instance(15, 3);
  RunOptions o;
  o.stop = {1e-5, true, 5000};
  const RunResult a = run_away_fw(in.g, in.f, o);
  const RunResult b = run_lkm(in.g, in.f, o);
  CHECK(a.status == RunStatus::Converged);
  CHECK(a.trace.back().primal_value == doctest::Approx(b.trace.back().primal_value).epsilon(1e-4));
  CHECK(count_lower_bound_violations(a) == 0);
}
