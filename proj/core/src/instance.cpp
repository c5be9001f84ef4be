#include "lkm/harness/instance.hpp"

#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include "json.hpp"

#include "lkm/errors.hpp"

namespace lkm::harness {

using nlohmann::json;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!obj.is_object()) throw InvalidInput(std::string(where) + ": expected an object");
  const std::set<std::string_view> ok(allowed);
  for (const auto& [key, _] : obj.items())
    if (!ok.contains(key)) throw InvalidInput(std::string(where) + ": unknown field '" + key + "'");
}

const json& require(const json& obj, const char* key, std::string_view where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw InvalidInput(std::string(where) + ": missing field '" + key + "'");
  return *it;
}

json params_or_empty(const json& obj) {
  auto it = obj.find("params");
  return it == obj.end() ? json::object() : *it;
}

json function_to_json(const FunctionSpec& fs) {
  return std::visit(Overloaded{
                        [](const Permutahedron&) { return json{{"kind", "permutahedron"}, {"params", json::object()}}; },
                        [](const CardinalityTruncation& c) {
                          return json{{"kind", "cardinality_truncation"}, {"params", {{"k", c.k}}}};
                        },
                        [](const MaximalElement& m) {
                          return json{{"kind", "maximal_element"}, {"params", {{"h", m.h}}}};
                        },
                        [](const ExplicitTable& t) {
                          return json{{"kind", "explicit_table"}, {"params", {{"values", t.values}}}};
                        },
                    },
                    fs);
}

json objective_to_json(const ObjectiveSpec& os) {
  return std::visit(Overloaded{
                        [](const RandomQuadratic& s) {
                          json params = json::object();
                          if (s.scale_shift) params["scale_shift"] = *s.scale_shift;
                          return json{{"kind", "random_quadratic"}, {"params", params}};
                        },
                        [](const IdentityObjective&) { return json{{"kind", "identity"}, {"params", json::object()}}; },
                        [](const ExplicitObjective& e) {
                          return json{{"kind", "explicit"}, {"params", {{"P", e.p}, {"b", e.b}}}};
                        },
                    },
                    os);
}

FunctionSpec function_from_json(const json& j) {
  reject_unknown(j, {"kind", "params"}, "function");
  const std::string kind = require(j, "kind", "function").get<std::string>();
  const json params = params_or_empty(j);
  if (kind == "permutahedron") {
    reject_unknown(params, {}, "function.params");
    return Permutahedron{};
  }
  if (kind == "cardinality_truncation") {
    reject_unknown(params, {"k"}, "function.params");
    return CardinalityTruncation{require(params, "k", "function.params").get<int>()};
  }
  if (kind == "maximal_element") {
    reject_unknown(params, {"h"}, "function.params");
    return MaximalElement{require(params, "h", "function.params").get<std::vector<double>>()};
  }
  if (kind == "explicit_table") {
    reject_unknown(params, {"values"}, "function.params");
    return ExplicitTable{require(params, "values", "function.params").get<std::vector<double>>()};
  }
  throw InvalidInput("function: unknown kind '" + kind + "'");
}

ObjectiveSpec objective_from_json(const json& j) {
  reject_unknown(j, {"kind", "params"}, "objective");
  const std::string kind = require(j, "kind", "objective").get<std::string>();
  const json params = params_or_empty(j);
  if (kind == "random_quadratic") {
    reject_unknown(params, {"scale_shift"}, "objective.params");
    RandomQuadratic s;
    if (params.contains("scale_shift")) s.scale_shift = params["scale_shift"].get<double>();
    return s;
  }
  if (kind == "identity") {
    reject_unknown(params, {}, "objective.params");
    return IdentityObjective{};
  }
  if (kind == "explicit") {
    reject_unknown(params, {"P", "b"}, "objective.params");
    return ExplicitObjective{require(params, "P", "objective.params").get<std::vector<std::vector<double>>>(),
                             require(params, "b", "objective.params").get<std::vector<double>>()};
  }
  throw InvalidInput("objective: unknown kind '" + kind + "'");
}

}  // namespace

double unit_uniform(std::uint64_t draw) { return static_cast<double>(draw >> 11) * 0x1.0p-53; }

RandomQuadraticData random_quadratic_data(int n, std::uint64_t seed, double scale_shift) {
  if (n < 1) throw InvalidInput("random_quadratic: n must be positive");
  for (int attempt = 0; attempt <= 8; ++attempt) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(attempt);
    std::mt19937_64 rng(s);
    Matrix a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = -1.0 + 2.0 * unit_uniform(rng());
    Vector b(n);
    for (int i = 0; i < n; ++i) b[i] = static_cast<double>(n) * unit_uniform(rng());
    Matrix q = 0.5 * (a + a.transpose());
    q.diagonal().array() += scale_shift;
    Matrix p = 2.0 * q;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(p, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() >= 1e-6) return {std::move(p), std::move(b), s};
  }
  throw InvalidInput("random_quadratic: could not generate a positive definite objective after 8 resamples");
}

Instance generate_instance(const InstanceSpec& spec) {
  const int n = spec.n;
  if (n < 1) throw InvalidInput("instance: n must be positive");

  SubmodularFunction f = std::visit(
      Overloaded{
          [n](const Permutahedron&) { return SubmodularFunction::permutahedron(n); },
          [n](const CardinalityTruncation& c) { return SubmodularFunction::cardinality_truncation(n, c.k); },
          [n](const MaximalElement& m) {
            if (static_cast<int>(m.h.size()) != n) throw InvalidInput("maximal_element: h must have n entries");
            return SubmodularFunction::maximal_element(m.h);
          },
          [n](const ExplicitTable& t) { return SubmodularFunction::explicit_table(n, t.values); },
      },
      spec.function);

  std::uint64_t seed_used = spec.seed;
  QuadraticObjective g = std::visit(
      Overloaded{
          [&](const RandomQuadratic& s) {
            RandomQuadraticData d = random_quadratic_data(n, spec.seed, s.scale_shift.value_or(static_cast<double>(n)));
            seed_used = d.seed_used;
            return QuadraticObjective(std::move(d.p), std::move(d.b));
          },
          [n](const IdentityObjective&) { return QuadraticObjective::identity(n); },
          [n](const ExplicitObjective& e) {
            if (static_cast<int>(e.p.size()) != n || static_cast<int>(e.b.size()) != n)
              throw InvalidInput("explicit objective: P must be n x n and b length n");
            Matrix p(n, n);
            for (int i = 0; i < n; ++i) {
              if (static_cast<int>(e.p[static_cast<std::size_t>(i)].size()) != n)
                throw InvalidInput("explicit objective: P must be n x n");
              for (int j = 0; j < n; ++j) p(i, j) = e.p[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            }
            return QuadraticObjective(std::move(p), Eigen::Map<const Vector>(e.b.data(), n));
          },
      },
      spec.objective);

  return Instance{std::move(g), std::move(f), seed_used};
}

std::string to_json(const InstanceSpec& spec) {
  json j = {{"version", 1},
            {"n", spec.n},
            {"seed", spec.seed},
            {"function", function_to_json(spec.function)},
            {"objective", objective_to_json(spec.objective)},
            {"notes", spec.notes}};
  return j.dump(2);
}

InstanceSpec parse_instance(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("instance: ") + e.what());
  }
  try {
    reject_unknown(j, {"version", "n", "seed", "function", "objective", "notes"}, "instance");
    if (require(j, "version", "instance").get<int>() != 1) throw InvalidInput("instance: unsupported version");
    InstanceSpec spec;
    spec.n = require(j, "n", "instance").get<int>();
    if (j.contains("seed")) spec.seed = j["seed"].get<std::uint64_t>();
    spec.function = function_from_json(require(j, "function", "instance"));
    spec.objective = objective_from_json(require(j, "objective", "instance"));
    if (j.contains("notes")) spec.notes = j["notes"].get<std::string>();
    return spec;
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("instance: ") + e.what());
  }
}

InstanceSpec load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open instance file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_instance(ss.str());
}

}  // namespace lkm::harness
