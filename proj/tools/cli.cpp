#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "lkm/algorithms.hpp"
#include "lkm/errors.hpp"
#include "lkm/harness/instance.hpp"
#include "lkm/harness/report.hpp"
#include "lkm/harness/verify.hpp"

namespace lkm::cli {

namespace fs = std::filesystem;
using harness::InstanceSpec;

namespace {

struct InstanceFlags {
  std::string file;
  int n = 10;
  std::uint64_t seed = 1;
  std::string function = "permutahedron";
  int k = 1;
  std::string objective = "random";
  double scale_shift = 0.0;  // 0 means n
  std::string notes;

  void attach(CLI::App* app) {
    app->add_option("--instance", file, "Instance JSON file (overrides generator flags)");
    app->add_option("--n", n, "Ground set size")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Generator seed");
    app->add_option("--function", function, "Submodular family")
        ->check(CLI::IsMember({"permutahedron", "cardinality_truncation"}));
    app->add_option("--k", k, "Truncation level for cardinality_truncation");
    app->add_option("--objective", objective, "Objective kind")->check(CLI::IsMember({"random", "identity"}));
    app->add_option("--scale-shift", scale_shift, "Diagonal shift of the random objective (default n)");
    app->add_option("--notes", notes, "Free text stored in the instance file");
  }

  InstanceSpec spec() const {
    if (!file.empty()) return harness::load_instance(file);
    InstanceSpec s;
    s.n = n;
    s.seed = seed;
    if (function == "cardinality_truncation") s.function = CardinalityTruncation{k};
    if (objective == "identity") {
      s.objective = harness::IdentityObjective{};
    } else {
      harness::RandomQuadratic r;
      if (scale_shift > 0.0) r.scale_shift = scale_shift;
      s.objective = r;
    }
    s.notes = notes;
    return s;
  }
};

struct RunFlags {
  double eps = 1e-8;
  bool relative = false;
  int max_iters = 1000;
  std::string b_rule = "minimal";

  void attach(CLI::App* app) {
    app->add_option("--eps", eps, "Stopping tolerance on the gap")->check(CLI::NonNegativeNumber);
    app->add_flag("--relative", relative, "Scale eps by 1 + |g(x) + f(x)|");
    app->add_option("--max-iters", max_iters, "Iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--b-rule", b_rule, "L-FCFW memory rule")->check(CLI::IsMember({"minimal", "active", "full"}));
  }

  RunOptions options() const {
    RunOptions o;
    o.stop = {eps, relative, max_iters};
    o.support_rule = *parse_support_rule(b_rule);
    o.record_iterates = false;
    return o;
  }
};

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return kConverged;
    case RunStatus::IterationCap: return kIterationCap;
    case RunStatus::InnerSolverFailure: return kInnerSolverFailure;
  }
  return kInnerSolverFailure;
}

void print_summary(const RunResult& r) {
  std::cout << method_name(r.method) << ": " << status_name(r.status) << " after " << r.iterations()
            << " iterations";
  if (!r.trace.empty()) {
    const IterationRecord& last = r.trace.back();
    std::cout << ", p=" << std::setprecision(12) << last.p << " d=" << last.d << " gap=" << last.gap;
  }
  std::cout << '\n';
}

int cmd_solve(const InstanceFlags& inst, const RunFlags& rf, const std::string& algo, const std::string& trace,
              const std::string& plot, const std::string& summary) {
  const Method m = *parse_method(algo);
  const harness::Instance in = harness::generate_instance(inst.spec());
  const RunResult r = run_method(m, in.g, in.f, rf.options());
  if (!trace.empty()) harness::write_trace_csv(trace, r);
  if (!plot.empty()) harness::write_text(plot, harness::solve_plot(r));
  if (!summary.empty()) harness::write_text(summary, harness::summary_json(r));
  print_summary(r);
  if (!r.message.empty()) std::cerr << r.message << '\n';
  return exit_code(r.status);
}

std::vector<std::string> split(const std::string& list) {
  std::vector<std::string> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_compare(const InstanceFlags& inst, const RunFlags& rf, const std::string& algos, const std::string& out) {
  const std::vector<std::string> names = split(algos);
  if (names.size() < 2) throw InvalidInput("compare needs at least two algorithms");
  std::vector<Method> methods;
  for (const std::string& a : names) {
    auto m = parse_method(a);
    if (!m) throw InvalidInput("unknown algorithm '" + a + "'");
    methods.push_back(*m);
  }
  const harness::Instance in = harness::generate_instance(inst.spec());
  fs::create_directories(out);

  std::size_t threads = methods.size();
  if (const char* env = std::getenv("BENCH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) threads = std::min(threads, static_cast<std::size_t>(v));
  }

  std::vector<RunResult> results(methods.size());
  std::vector<std::string> errors(methods.size());
  std::size_t next = 0;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard lock(mu);
        if (next >= methods.size()) return;
        i = next++;
      }
      try {
        results[i] = run_method(methods[i], in.g, in.f, rf.options());
        harness::write_trace_csv((fs::path(out) / (names[i] + ".csv")).string(), results[i]);
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  for (const std::string& e : errors)
    if (!e.empty()) throw InvalidInput(e);

  struct Panel {
    harness::Metric metric;
    const char* file;
    const char* title;
    const char* ylabel;
    bool log_y;
    bool steps;
  };
  for (const Panel& p : {Panel{harness::Metric::Gap, "gap.svg", "gap per iteration", "gap", true, false},
                         Panel{harness::Metric::Memory, "memory.svg", "memory per iteration", "|V|", false, true},
                         Panel{harness::Metric::Time, "time.svg", "cumulative time", "ms", false, false}}) {
    std::vector<harness::Series> series;
    for (std::size_t i = 0; i < methods.size(); ++i)
      series.push_back(harness::trace_series(results[i], p.metric, names[i]));
    harness::write_text((fs::path(out) / p.file).string(),
                        harness::render_svg({p.title, "iteration", p.ylabel, p.log_y, p.steps}, series));
  }

  nlohmann::json merged = nlohmann::json::object();
  int code = kConverged;
  for (std::size_t i = 0; i < methods.size(); ++i) {
    merged[names[i]] = nlohmann::json::parse(harness::summary_json(results[i]));
    print_summary(results[i]);
    code = std::max(code, exit_code(results[i].status));
  }
  harness::write_text((fs::path(out) / "summary.json").string(), merged.dump(2));
  return code;
}

int cmd_verify(int n_max, int seeds, bool fault, const std::string& json_out) {
  harness::VerifyOptions o;
  o.n_max = n_max;
  o.seeds = seeds;
  o.inject_fault = fault;
  const auto results = harness::run_acceptance(o, &std::cout);
  if (!json_out.empty()) harness::write_text(json_out, harness::results_json(results));
  const bool ok = harness::all_passed(results);
  std::cout << (ok ? "all criteria passed" : "some criteria FAILED") << '\n';
  return ok ? kConverged : kVerifyFailed;
}

int cmd_gen(const InstanceFlags& inst, const std::string& out) {
  const InstanceSpec spec = inst.spec();
  harness::generate_instance(spec);  // reject specs that cannot be built
  const std::string text = harness::to_json(spec) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    harness::write_text(out, text);
  }
  return kConverged;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"Limited memory Kelley and fully corrective Frank-Wolfe experiments"};
  app.require_subcommand(1);

  InstanceFlags inst;
  RunFlags rf;
  std::string algo = "lkm", trace, plot, summary;
  CLI::App* solve = app.add_subcommand("solve", "Run one algorithm on one instance");
  inst.attach(solve);
  rf.attach(solve);
  solve->add_option("--algo", algo, "Algorithm")->check(CLI::IsMember({"lkm", "osm", "lfcfw", "fcfw", "awayfw"}));
  solve->add_option("--trace", trace, "Per-iteration CSV output");
  solve->add_option("--plot", plot, "SVG plot output");
  solve->add_option("--json", summary, "JSON summary output");

  InstanceFlags cinst;
  RunFlags crf;
  std::string algos = "lkm,osm", out_dir = "compare_out";
  CLI::App* compare = app.add_subcommand("compare", "Run several algorithms on the same instance");
  cinst.attach(compare);
  crf.attach(compare);
  compare->add_option("--algos", algos, "Comma separated algorithms");
  compare->add_option("--out", out_dir, "Output directory");

  int n_max = 6, seeds = 5;
  bool fault = false;
  std::string verify_json;
  CLI::App* verify = app.add_subcommand("verify", "Run the acceptance suite");
  verify->add_option("--n-max", n_max, "Largest n for the oracle comparison");
  verify->add_option("--seeds", seeds, "Seeds per n for the oracle comparison")->check(CLI::PositiveNumber);
  verify->add_flag("--inject-fault", fault, "Disable pruning in the L-FCFW memory check");
  verify->add_option("--json", verify_json, "Machine-readable report");

  InstanceFlags ginst;
  std::string gen_out;
  CLI::App* gen = app.add_subcommand("gen", "Write an instance file");
  ginst.attach(gen);
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  std::vector<std::string> rev(args.rbegin(), args.rend() - 1);
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidInput;
  }

  try {
    if (*solve) return cmd_solve(inst, rf, algo, trace, plot, summary);
    if (*compare) return cmd_compare(cinst, crf, algos, out_dir);
    if (*verify) return cmd_verify(n_max, seeds, fault, verify_json);
    if (*gen) return cmd_gen(ginst, gen_out);
  } catch (const InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ResourceLimit& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const ConvergenceError& e) {
    std::cerr << "inner solver failure: " << e.what() << '\n';
    return kInnerSolverFailure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kInvalidInput;
}

}  // namespace lkm::cli
