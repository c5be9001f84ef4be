#include <benchmark/benchmark.h>

#include <random>

#include "lkm/algorithms.hpp"
#include "lkm/harness/instance.hpp"

using namespace lkm;

namespace {

harness::Instance random_instance(int n, std::uint64_t seed) {
  harness::InstanceSpec s;
  s.n = n;
  s.seed = seed;
  return harness::generate_instance(s);
}

Vector random_x(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector x(n);
  for (int i = 0; i < n; ++i) x[i] = harness::unit_uniform(rng()) - 0.5;
  return x;
}

}  // namespace

static void BM_Greedy(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto f = SubmodularFunction::permutahedron(n);
  const Vector x = random_x(n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(greedy_vertex(f, x).value);
  state.SetComplexityN(n);
}
BENCHMARK(BM_Greedy)->RangeMultiplier(4)->Range(16, 4096)->Complexity(benchmark::oNLogN);

static void BM_Subproblem(benchmark::State& state) {
  const int n = 100;
  const int k = static_cast<int>(state.range(0));
  const auto in = random_instance(n, 2);
  VertexSet w;
  for (int j = 0; w.size() < static_cast<std::size_t>(k); ++j)
    w.add(greedy_vertex(in.f, random_x(n, 100 + static_cast<std::uint64_t>(j))).vertex);
  for (auto _ : state) benchmark::DoNotOptimize(solve_subproblem(w, in.g).dual_value);
}
BENCHMARK(BM_Subproblem)->Arg(8)->Arg(32)->Arg(101)->Unit(benchmark::kMillisecond);

static void BM_Run(benchmark::State& state) {
  const Method m = static_cast<Method>(state.range(0));
  const auto in = random_instance(static_cast<int>(state.range(1)), 1);
  RunOptions o;
  o.stop = {1e-5, true, 2000};
  o.record_iterates = false;
  int iters = 0;
  for (auto _ : state) iters = run_method(m, in.g, in.f, o).iterations();
  state.counters["iterations"] = iters;
  state.SetLabel(std::string(method_name(m)));
}
BENCHMARK(BM_Run)
    ->ArgsProduct({{static_cast<int>(Method::LimitedMemoryKelley), static_cast<int>(Method::OriginalSimplicial),
                    static_cast<int>(Method::LimitedMemoryFCFW), static_cast<int>(Method::FullyCorrectiveFW),
                    static_cast<int>(Method::AwayStepFW)},
                   {50, 100}})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
