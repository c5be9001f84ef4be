#include <sstream>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "lkm/errors.hpp"
#include "lkm/harness/instance.hpp"
#include "lkm/harness/report.hpp"

using namespace lkm;
using namespace lkm::harness;

TEST_CASE("random number conversion") {
  CHECK(unit_uniform(0) == 0.0);
  CHECK(unit_uniform(~std::uint64_t{0}) < 1.0);
  CHECK(unit_uniform(std::uint64_t{1} << 63) == 0.5);
}

TEST_CASE("random quadratic generation is deterministic") {
  const RandomQuadraticData a = random_quadratic_data(6, 99, 6.0);
  const RandomQuadraticData b = random_quadratic_data(6, 99, 6.0);
  CHECK(a.p == b.p);
  CHECK(a.b == b.b);
  CHECK(a.seed_used == 99);
  CHECK(a.p.isApprox(a.p.transpose(), 0.0));
  CHECK(a.b.minCoeff() >= 0.0);
  CHECK(a.b.maxCoeff() < 6.0);
  // Off-diagonal entries of P are A_ij + A_ji with A in [-1, 1].
  CHECK(a.p.cwiseAbs().maxCoeff() <= 2.0 * (1 + 6));
  const RandomQuadraticData c = random_quadratic_data(6, 100, 6.0);
  CHECK(c.p != a.p);

  InstanceSpec spec;
  spec.n = 20;
  spec.seed = 3;
  const Instance in = generate_instance(spec);
  const Matrix sym_a = in.g.hessian() / 2 - 20 * Matrix::Identity(20, 20);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym_a);
  const double norm = eig.eigenvalues().cwiseAbs().maxCoeff();
  CHECK(norm <= 20.0);
  CHECK(in.g.strong_convexity() >= 2 * (20 - norm) - 1e-9);
  CHECK(in.g.strong_convexity() > 0.0);

  // A zero shift usually leaves an indefinite matrix, which triggers resampling and then an error.
  CHECK_THROWS_AS(random_quadratic_data(8, 1, -50.0), InvalidInput);
}

TEST_CASE("permutahedron values on generated instances") {
  InstanceSpec spec;
  spec.n = 3;
  spec.seed = 17;
  const Instance in = generate_instance(spec);
  const std::vector<int> pair{0, 2};
  CHECK(in.f.evaluate(pair) == 5.0);

  spec.objective = IdentityObjective{};
  spec.n = 2;
  const Instance id = generate_instance(spec);
  CHECK(id.g.hessian() == Matrix::Identity(2, 2));
  CHECK(id.g.linear() == Vector::Zero(2));
}

TEST_CASE("instance JSON round trip") {
  InstanceSpec spec;
  spec.n = 3;
  spec.seed = 18446744073709551615ULL;
  spec.function = MaximalElement{{0.1, 1.0 / 3.0, -2.5e-7}};
  spec.objective = ExplicitObjective{{{2, 0.5, 0}, {0.5, 1, 0}, {0, 0, 1.0 / 7.0}}, {0.1, 0.2, 0.3}};
  spec.notes = "round trip";
  const InstanceSpec back = parse_instance(to_json(spec));
  CHECK(back.n == 3);
  CHECK(back.seed == spec.seed);
  CHECK(std::get<MaximalElement>(back.function).h == std::get<MaximalElement>(spec.function).h);
  CHECK(std::get<ExplicitObjective>(back.objective).p == std::get<ExplicitObjective>(spec.objective).p);
  CHECK(back.notes == "round trip");
  CHECK(to_json(back) == to_json(spec));

  InstanceSpec s7;
  s7.n = 4;
  s7.function = CardinalityTruncation{2};
  s7.objective = RandomQuadratic{2.5};
  const InstanceSpec s7b = parse_instance(to_json(s7));
  CHECK(std::get<RandomQuadratic>(s7b.objective).scale_shift == 2.5);
  CHECK(std::get<CardinalityTruncation>(s7b.function).k == 2);
}

TEST_CASE("instance JSON rejects bad input") {
  const char* base = R"({"version":1,"n":2,"seed":1,"function":{"kind":"permutahedron"},"objective":{"kind":"identity"}})";
  CHECK_NOTHROW(parse_instance(base));
  CHECK_THROWS_AS(parse_instance(R"({"version":1,"n":2,"extra":0,"function":{"kind":"permutahedron"},"objective":{"kind":"identity"}})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_instance(R"({"version":2,"n":2,"function":{"kind":"permutahedron"},"objective":{"kind":"identity"}})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_instance(R"({"version":1,"n":2,"function":{"kind":"nope"},"objective":{"kind":"identity"}})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_instance(R"({"version":1,"n":2,"function":{"kind":"permutahedron","params":{"k":1}},"objective":{"kind":"identity"}})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_instance(R"({"version":1,"n":"two","function":{"kind":"permutahedron"},"objective":{"kind":"identity"}})"),
                  InvalidInput);
  CHECK_THROWS_AS(parse_instance("{not json"), InvalidInput);
  CHECK_THROWS_AS(load_instance("/nonexistent/file.json"), InvalidInput);

  InstanceSpec bad;
  bad.n = 3;
  bad.function = MaximalElement{{1.0, 2.0}};
  CHECK_THROWS_AS(generate_instance(bad), InvalidInput);
}

TEST_CASE("trace CSV and summary") {
  RunResult r;
  r.method = Method::OriginalSimplicial;
  r.status = RunStatus::Converged;
  IterationRecord a;
  a.iter = 1;
  a.p = -1.5;
  a.d = -2.5;
  a.gap = 1.0;
  a.memory_size = 2;
  a.active_size = 1;
  a.inner_iterations = 1;
  a.cum_time_ms = 0.25;
  r.trace.push_back(a);
  std::ostringstream out;
  write_trace_csv(out, r);
  CHECK(out.str() == "iter,p,d,gap,memory_size,active_size,inner_iterations,cum_time_ms\n1,-1.5,-2.5,1,2,1,1,0.25\n");
  const std::string js = summary_json(r);
  CHECK(js.find("\"status\": \"converged\"") != std::string::npos);
  CHECK(js.find("\"final_p\": -1.5") != std::string::npos);
  CHECK(js.find("\"final_d\": -2.5") != std::string::npos);
  CHECK(js.find("\"iterations\": 1") != std::string::npos);
  CHECK(js.find("\"total_ms\"") != std::string::npos);
}

TEST_CASE("SVG output") {
  Series s{"lkm", {1, 2, 3}, {1.0, 0.1, 0.0}};
  const std::string svg = render_svg({"gap <test>", "iteration", "gap", true, false}, {s});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("gap &lt;test&gt;") != std::string::npos);
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(render_svg({"empty"}, {}).find("</svg>") != std::string::npos);
}
